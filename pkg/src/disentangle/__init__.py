"""Two-qubit disentanglement under partial super-Ohmic pure dephasing."""
