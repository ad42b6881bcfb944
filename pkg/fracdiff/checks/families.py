from fracdiff.models.model_params import KernelKind, ModelParams

# Propagator families shared by the moment and conservation checks: label -> (params, kind)
FAMILIES = {
    "case1 gamma=1 theta=0": (ModelParams(gamma=1.0, theta=0.0), "case1"),
    "case1 gamma=0.5 theta=0": (ModelParams(gamma=0.5, theta=0.0), "case1"),
    "case1 gamma=1 theta=1": (ModelParams(gamma=1.0, theta=1.0), "case1"),
    "case1 gamma=0.5 theta=1 N=2": (ModelParams(gamma=0.5, theta=1.0, n_dim=2), "case1"),
    "case1 gamma=0.8 theta=0.5 N=2": (ModelParams(gamma=0.8, theta=0.5, n_dim=2), "case1"),
    "case2 gamma=0.5 alpha=0.3": (ModelParams(gamma=0.5, theta=0.5, alpha_mem=0.3,
                                              kernel_kind=KernelKind.POWER_LAW), "case2"),
    "drift gamma=1 theta=1": (ModelParams(gamma=1.0, theta=1.0, k_drift=1.0, drift_exponent=-2.0), "drift"),
    "drift gamma=0.7 theta=1 N=2": (ModelParams(gamma=0.7, theta=1.0, n_dim=2, k_drift=1.0,
                                                drift_exponent=-2.0), "drift"),
}
