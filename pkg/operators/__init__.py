__all__ = ["sim_paths", "kernel_tables", "model_fit", "approx_diag", "self_check"]
