"""Online regression and classification on the bundled 200-row samples.

Run: python3 notebooks/05_dataset_runs.py

For the full-size runs, point the csv fields of configs/regression_full.yaml
and configs/classification_full.yaml at the downloaded UCI files and use
    faultoco run --config configs/regression_full.yaml --jobs 8
"""

from pathlib import Path

from faultoco.config import load_config
from faultoco.experiment import run_experiment

root = Path(__file__).resolve().parents[1]

for name in ("regression_toy.yaml", "classification_toy.yaml"):
    cfg = load_config(root / "configs" / name).with_overrides(rounds=600, trials=6)
    result = run_experiment(cfg)
    print(f"# {cfg.experiment}: time-averaged loss after {cfg.rounds} rounds")
    for key, s in sorted(result.summary.variants.items()):
        print(f"  {key:30s} {s.mean:.4f} +- {s.sd:.4f}")
