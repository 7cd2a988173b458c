"""Statistical quantum phase estimation on a dense statevector emulator."""
