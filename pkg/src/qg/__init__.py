"""Finite quantum group engine with multiplier calculus, exact CB norms,
free products, fusion categories and doubles."""

__version__ = "0.1.0"

from .hopf import (  # noqa: F401
    HopfData,
    Realization,
    ValidationReport,
    bidual_check,
    block_structure,
    classify_l2_implementation,
    dual_hopf,
    fn_algebra,
    group_algebra,
    haar_state,
    kac_paljutkin,
    l2_implement,
    left_multiplier,
    multiplicative_unitary,
    realize,
    trivial_hopf,
    validate_hopf,
)

from .corep import (  # noqa: F401
    FinSupp,
    IrrTable,
    PolElement,
    antipode,
    antipode_inv,
    central_average,
    group_table,
    module_action,
    multiplier_involution,
    rep_s3_table,
    rep_z2_table,
    scaling_modular_action,
    schur_gram,
    subgroup_expectation,
    suq2_table,
    symmetrize_ap_net,
    theta_apply,
)

from .bridge import (  # noqa: F401
    CorepBridge,
    bridge_fn_cyclic,
    bridge_fn_s3,
    bridge_group_algebra,
    bridge_group_s3,
)

from .sdp import (  # noqa: F401
    SdpProblem,
    SdpSolution,
    herm_basis,
    solve_sdp,
)

from .cbnorm import (  # noqa: F401
    BlockMap,
    CbCertificate,
    MultiplierCbReport,
    cb_norm_exact,
    cb_norm_lower,
    multiplier_block_map,
    multiplier_cb_report,
)

from .freeprod import (  # noqa: F401
    AlternatingWord,
    BoundedMultiplier,
    FreeProductTable,
    enumerate_words,
    free_fusion,
    length_projection,
    psi_d,
    tn_series,
)
