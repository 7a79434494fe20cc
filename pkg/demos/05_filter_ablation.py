"""
Stability weighting vs. low-pass vs. random bin selection
=========================================================

Replaces the learnable stability weighting with a fixed low-pass filter and
with a random subset of bins (both keep the same number of bins) and trains
the backbone on each. Three seeds; a few minutes.
"""
import json
from pathlib import Path

from frednorm import Config
from frednorm.cli import format_table, run_ablation

cfg_path = Path(__file__).resolve().parents[1] / "configs" / "synthetic_benchmark.json"
cfg = Config.from_dict(json.loads(cfg_path.read_text()))

rows = run_ablation(cfg, seeds=[0, 1, 2])
print(format_table(rows))
