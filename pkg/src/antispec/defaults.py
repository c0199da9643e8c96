"""Default tolerances, collected in one place."""

#: commutation residual accepted as "A is a symmetry of H"
TOL_SYM = 1e-10
#: |Im E| <= TOL_REAL * max(1, |E|) counts as real
TOL_REAL = 1e-8
#: overlap >= 1 - TOL_PROP counts as "A psi proportional to psi"
TOL_PROP = 1e-8
#: bisection stopping width for thresholds
TOL_PARAM = 1e-6
#: eigenvalue clustering, relative to max(1, spectral radius)
TOL_DEGENERACY = 1e-8
#: eigenvector conditioning above which a matrix is treated as defective
COND_MAX = 1e8
#: duality / resolution-of-identity residual guaranteed by biorthogonalize
TOL_BIORTHO = 1e-8
#: unitarity check for user-supplied unitaries
TOL_UNITARY = 1e-10
