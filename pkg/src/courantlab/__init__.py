"""courantlab: Dirichlet spectra, nodal domains, counting-function inequalities,
and discrete capacity on rectangles and masked grids."""

__version__ = "0.1.0"

from .exact_spectra import (  # noqa: F401
    ExactEigenvalue,
    ExactSpectrum,
    RectSpec,
    Scale,
    enumerate_spectrum,
    kth_eigenvalue,
    section62_scenario,
)
from .counting import (  # noqa: F401
    CountingTriple,
    NumericSpectrum,
    count,
    count_exact,
    count_numeric,
    merge_disjoint,
)
from .partition_check import (  # noqa: F401
    check_converse,
    check_main,
    check_submu,
    check_subset,
    check_weak,
    courant_check,
)
from .lattice import count_full, count_positive, deficit, sharpness_scan  # noqa: F401
from .grid import (  # noqa: F401
    Difference,
    Disk,
    GridGeometry,
    Rect,
    SubdomainFamily,
    Union,
    check_disjoint,
    components,
    rasterize,
    star_interior,
)
from .eigensolver import (  # noqa: F401
    DiscreteHamiltonian,
    EigenPair,
    assemble,
    discrete_oracle,
    rayleigh_check,
    smallest_k,
)
from .nodal import courant_audit, extract, harnack_probe, nodal_family  # noqa: F401
from .capacity import (  # noqa: F401
    CapacityProblem,
    capacity,
    is_capacity_regular,
    polar_scaling,
    verify_capreg,
)
