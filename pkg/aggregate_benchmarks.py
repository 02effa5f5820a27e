#!/usr/bin/env python3
"""
aggregate_benchmarks.py - Average benchmark CSVs over repeats and seeds
"""

import argparse
import json

from loguru import logger

from nlca._benchmark import aggregate_csv


def split_file_list(value: str):
    # Handle both space-separated and comma-separated lists
    separator = "," if "," in value else None
    return [f.strip() for f in value.split(separator) if f.strip()]


def main():
    parser = argparse.ArgumentParser(description="Aggregate benchmark results from multiple runs")
    parser.add_argument("--input_files", type=str, required=True, help="Space- or comma-separated benchmark CSV files")
    parser.add_argument("--output", type=str, required=True, help="Output JSON file for aggregated results")
    args = parser.parse_args()

    input_files = split_file_list(args.input_files)
    if not input_files:
        logger.error("No input files specified")
        return 1

    logger.info(f"Aggregating benchmark results from {len(input_files)} files")
    summary = aggregate_csv(input_files)
    with open(args.output, "w") as f:
        json.dump({"files": input_files, "cells": summary.to_dict(orient="records")}, f, indent=2)

    print("\nAggregated Benchmark Summary:")
    print(summary.to_string(index=False, float_format=lambda v: f"{v:.4f}"))
    print(f"\nAggregated results saved to: {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
