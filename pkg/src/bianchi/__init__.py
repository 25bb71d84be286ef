"""Bianchi modular forms with nebentypus over Euclidean imaginary quadratic
fields: exact cohomological dimension computations, Hecke eigensystems, and a
p-adic power-series rigidity toolkit with a finiteness-verification pipeline
for ordinary families."""

__version__ = "0.1.0"
