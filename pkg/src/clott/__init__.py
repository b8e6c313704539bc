"""A kernel for a clocked guarded type theory with an executable
presheaf-style evaluator at finite time stages."""

__version__ = "0.1.0"
