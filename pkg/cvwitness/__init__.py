"""
cvwitness Package

Continuous-variable entanglement witnessing with fourth-order cumulants:

- **phase_space**: States as affine sums of complex-weighted Gaussians and Gaussian channels
- **moments**: Weyl-ordered moments and cumulants of quadrature polynomials
- **states**: Reference states, coherent-ring Fock approximations and the PhSSV circuit
- **witness**: Fourth-order and Duan criteria, loss scaling and threshold search
- **sampling**: Exact homodyne/heterodyne sampling and jackknifed cumulant estimators
- **fock_oracle**: Truncated Fock-space cross-check of the phase-space engine
- **cli**: The ``cvwitness`` command
"""

__version__ = "0.1.0"
