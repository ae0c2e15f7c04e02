"""Multi-energy hub planning: MILP model, carbon policy, budgeted robustness."""
