"""listlab: a finite-field coding lab.

Exact small-scale oracles for (average-radius) list decodability, plurality
calculus over codeword sets, Johnson-type agreement bounds, and Monte Carlo
experiments for a Gaussian chaining construction over randomly sampled codes.
"""

from __future__ import annotations

__version__ = "0.1.0"
