"""Executable Schroeder-Bernstein construction over finite and residue-class carriers."""
