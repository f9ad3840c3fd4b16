"""q-analogues of Dirichlet beta values: exact linear forms and their checks."""

__version__ = "0.1.0"
