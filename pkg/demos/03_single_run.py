"""One end-to-end federated run on the bundled scenario.

Runs the asynchronous baseline policy for 24 simulated hours, then prints
the upload log head, staleness statistics and an ASCII accuracy curve.
"""

from satfl import bundled_scenario_path, load_scenario, run_simulation

scenario = load_scenario(bundled_scenario_path())
print(f"policy {scenario.policy}, {scenario.satellite_count} satellites, "
      f"training time {scenario.train_time_s:.0f} s per update, "
      f"horizon {scenario.horizon_s / 3600:.0f} h")

result = run_simulation(scenario)

# ---------------------------------------------------------------------------
# Upload log: who contributed when, and how stale each update was
# ---------------------------------------------------------------------------
uploads = result.upload_rows()
print(f"\n{len(uploads)} uploads aggregated "
      f"(global epoch {result.global_epoch}); first ten:")
print(f"{'time s':>9} {'sat':>3} {'epoch':>5} {'stale epochs':>12} "
      f"{'stale s':>9}")
for row in uploads[:10]:
    print(f"{row.sim_time_s:>9.1f} {row.satellite_id:>3} "
          f"{row.global_epoch:>5} {row.epoch_staleness:>12} "
          f"{row.time_staleness_s:>9.1f}")

print(f"\nmean time staleness  {result.mean_time_staleness_s():.1f} s")
print(f"mean epoch staleness {result.mean_epoch_staleness():.2f}")

# ---------------------------------------------------------------------------
# Accuracy trajectory
# ---------------------------------------------------------------------------
print(f"\naccuracy: {result.initial_accuracy:.3f} -> "
      f"{result.final_accuracy:.3f}")
print("test accuracy over time (rows = 2 h bins):")
evals = result.eval_rows()
for i in range(0, len(evals), 12):
    chunk = evals[i:i + 12]
    acc = sum(r.test_accuracy for r in chunk) / len(chunk)
    bar = "#" * int(round(acc * 50))
    print(f"  {chunk[0].sim_time_s / 3600:>4.0f} h |{bar:<50}| {acc:.3f}")
