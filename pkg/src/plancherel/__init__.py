"""Spectral theory of a hypergeometric Sturm-Liouville operator and the
branching of K-Bessel-type representations: special functions, the
spectral transform with its Plancherel measure, Bessel operators and
numerical checks of the resulting decompositions."""

__version__ = "0.1.0"
