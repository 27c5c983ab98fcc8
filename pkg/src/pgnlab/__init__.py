"""pgnlab: exact generalized (n+1)-systems and successive-minima trajectories.

Subpackages and modules:

* ``exact_pwl``      piecewise-linear functions over the rationals
* ``system_builder`` blocks, growth sequences, glued and expanded systems
* ``system_checks``  axiom validation, extremal ratios, exponent checks
* ``lattice_minima`` gauge bodies, exact enumeration, trajectories
* ``cli``            the ``pgnlab`` command
"""

__version__ = "0.1.0"
