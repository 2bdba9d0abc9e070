"""Monte-Carlo size and power via the experiment runner.

One plan measures the empirical size on white noise; a second sweeps the
autoregressive coefficient and shows the rejection rate climbing from the
nominal level to 1. Rates come with their Monte-Carlo standard errors.

    python3 demos/04_size_and_power.py      # ~half a minute
"""

from wise.bench import ExperimentPlan, run_experiment
from wise.simgen import from_setting

R = 200

size_plan = ExperimentPlan(
    model=from_setting("setting1.1", 50, 100),
    n_values=(50,),
    p_values=(50, 100),
    replications=R,
    master_seed=7,
)
print(f"size on i.i.d. noise, {R} replications per cell")
for cell in run_experiment(size_plan).cells:
    print(f"  n={cell.n:3d} p={cell.p:3d}  rate = {cell.rate:.3f} "
          f"(mc se {cell.mc_se:.3f}, nominal 0.05)")

print(f"\npower sweep, AR coefficient 0 -> 0.2, n=50 p=100, {R} replications")
for coef in (0.0, 0.05, 0.1, 0.2):
    plan = ExperimentPlan(
        model=from_setting("setting2.1", 50, 100, coef_scale=coef),
        n_values=(50,),
        p_values=(100,),
        replications=R,
        master_seed=7,
    )
    cell = run_experiment(plan).cells[0]
    bar = "#" * round(40 * cell.rate)
    print(f"  coef {coef:5.2f}  rate = {cell.rate:.3f} +- {cell.mc_se:.3f}  {bar}")
