"""hyperlab: desk-scale experiments on hyperrigid generator sets.

Subpackages:

* ``linalg``   dense complex kernels (eigh, norms, PSD projection, kron/ptrace)
* ``opsys``    generated *-algebras, commutants, irreducibility
* ``cpmaps``   Choi matrices, Kraus sets, Stinespring dilations, Schwarz defects
* ``toeplitz`` exact Laurent-band + finite-tail arithmetic on l2(N)
* ``uep``      the unique-extension-property falsifier
* ``korovkin`` convergence experiments for sequences of positive unital maps
* ``cli``      the ``hyperlab`` command line front end
"""

__version__ = "0.1.0"
