from .loading_hamiltonians import HamiltonianParseError, load_terms_from_file, parse_hamiltonian

__all__ = ["HamiltonianParseError", "load_terms_from_file", "parse_hamiltonian"]
