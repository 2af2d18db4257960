"""Robust minimum logarithmic norm relative entropy (LNRE) estimation.

Modules
-------
divergences   KLD / DPD / LDPD / LNRE between scalar densities
models        Student t & r families, mixtures, power-law representation
kde           Gaussian kernel density estimate and the power weights
genlik        generalized likelihoods and exact deformed distributions
sufficiency   weighted sufficient statistics, Rao-Blackwell, Fisher bounds
estimators    closed-form and piecewise minimum-LNRE estimators
study         Monte Carlo contamination studies and the Newcomb analysis
cli           command-line interface (``lnre ...``)
"""

__version__ = "0.1.0"
