"""Exact Fock-space computations for affine quantum symmetric pairs of types C and B."""
