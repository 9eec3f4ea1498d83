"""meshloop-simulate: batch experiment runner for simulated raters.

Reads every *.json rater config in a directory and runs the synthetic
session loop for the configured seeds, writing one JSONL file of evaluation
sequences per config (same schema as the service's /export).

Config document:

    {
      "schema_version": 1,
      "label": "unbiased",
      "rater": {"anchoring_weight": 0.0, ...},      # RaterModel fields
      "seeds": 50,                                   # count, or explicit list
      "max_iterations": 11,
      "stop_on_satisfaction": false
    }

The rater's "seed" field is ignored; each run seeds the rater and the loop
with the per-sequence seed so every sequence is independently reproducible.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..service.records import SCHEMA_VERSION, sequence_to_json
from .experiments import corpus_summary, synthetic_utility
from .model import RaterModel
from .sessions import run_synthetic_session


def load_config(path: Path) -> dict:
    config = json.loads(path.read_text(encoding="utf-8"))
    version = config.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"{path.name}: unsupported schema version {version!r}")
    config.setdefault("label", path.stem)
    config.setdefault("rater", {})
    config.setdefault("seeds", 50)
    config.setdefault("max_iterations", 11)
    config.setdefault("stop_on_satisfaction", False)
    return config


def run_config(config: dict) -> list:
    seeds = config["seeds"]
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    rater_fields = dict(config["rater"])
    rater_fields.pop("seed", None)
    sequences = []
    for seed in seeds:
        utility, _ = synthetic_utility(seed)
        rater = RaterModel(seed=seed, **rater_fields)
        sequences.append(run_synthetic_session(
            utility, rater, seed=seed,
            max_iterations=config["max_iterations"],
            stop_on_satisfaction=config["stop_on_satisfaction"],
            session_id=f"{config['label']}-{seed}",
            mesh_label=config["label"],
        ))
    return sequences


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshloop-simulate",
        description="Run simulated-rater session corpora from JSON configs",
    )
    parser.add_argument("--config-dir", required=True,
                        help="directory of *.json rater configs")
    parser.add_argument("--out", required=True,
                        help="output directory for <label>.jsonl corpora")
    parser.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config_dir = Path(args.config_dir)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    config_paths = sorted(config_dir.glob("*.json"))
    if not config_paths:
        print(f"no *.json configs in {config_dir}", file=sys.stderr)
        return 2
    for path in config_paths:
        config = load_config(path)
        sequences = run_config(config)
        out_path = out_dir / f"{config['label']}.jsonl"
        with open(out_path, "w", encoding="utf-8") as fh:
            for seq in sequences:
                fh.write(sequence_to_json(seq) + "\n")
        if not args.quiet:
            summary = corpus_summary(sequences)
            print(f"{config['label']}: {summary['n']} sequences, "
                  f"satisfaction {summary['satisfied']}/{summary['n']}, "
                  f"reached-5 {summary['reached_five']}/{summary['n']} "
                  f"-> {out_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
