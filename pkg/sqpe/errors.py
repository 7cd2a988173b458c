class ConvergenceError(RuntimeError):
    """A search did not settle within its iteration budget or found nothing significant."""
