"""gazeforge: synthetic contextual-gaze emotion recognition toolkit."""

from ._gazeforge import (  # noqa: F401
    __version__,
    cawf1,
    classification_report,
    cosine_similarity,
    dir_to_erp,
    dtw_distance,
    erp_to_dir,
    gaze_accuracy,
    head_to_dir,
    kl_divergence,
    mi_estimate,
    mse,
    pr_curve,
    ring_triangulation_error,
    rng_draws,
    run_pipeline,
    scene_summary,
    softmax,
)
