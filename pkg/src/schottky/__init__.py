"""Schottky uniformization, numerically and over exact power series.

Subpackages and modules:

* :mod:`schottky.algebra` - exact polynomials, fractions, truncated series
* :mod:`schottky.moebius` - Moebius maps over an abstract field
* :mod:`schottky.words` - reduced-word and coset enumeration
* :mod:`schottky.numeric` - floating-point period matrices and differentials
* :mod:`schottky.universal` - universal periods as formal series
* :mod:`schottky.qforms` - Tate curve, Eisenstein series and friends
* :mod:`schottky.siegel` - Siegel Fourier expansions and theta series
"""

__version__ = "0.1.0"
