#!/usr/bin/env python
"""Write a regression corpus of random valid problems (and one assignment per problem)."""
import argparse
import random
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from streampart.services.instances import random_assignment, random_problem
from streampart.services.problem_io import serialize_assignment, serialize_problem
from streampart.services.validation import has_errors, validate_problem


def generate_corpus(output_dir: Path, count: int, seed: int, max_free: int, r_max: int) -> int:
    """Generate count problems; return how many were written."""
    rng = random.Random(seed)
    output_dir.mkdir(parents=True, exist_ok=True)
    written = 0
    for n in range(count):
        problem = random_problem(
            rng,
            free=rng.randint(1, max_free),
            pinned_sw=rng.randint(1, 2),
            pinned_hw=rng.randint(0, 1),
            r_max=r_max,
        )
        diagnostics = validate_problem(problem)
        if has_errors(diagnostics):
            print(f"[ERROR] instance {n} failed validation: {diagnostics[0]}", file=sys.stderr)
            continue
        stem = f"instance_{n:03d}"
        (output_dir / f"{stem}.json").write_text(serialize_problem(problem), encoding="utf-8")
        assignment = random_assignment(rng, problem)
        (output_dir / f"{stem}.assign.json").write_text(serialize_assignment(assignment), encoding="utf-8")
        written += 1
    return written


def parse_args():
    parser = argparse.ArgumentParser(description="Generate a corpus of random streampart problems.")
    parser.add_argument("-o", "--output", default="corpus", help="Output directory (default: corpus)")
    parser.add_argument("-n", "--count", type=int, default=20, help="Number of instances (default: 20)")
    parser.add_argument("-s", "--seed", type=int, default=1, help="Random seed (default: 1)")
    parser.add_argument("--max-free", type=int, default=5, help="Maximum free processes per instance (default: 5)")
    parser.add_argument("--r-max", type=int, default=4, help="Maximum replication factor (default: 4)")
    return parser.parse_args()


def main():
    """Entry point for the script."""
    args = parse_args()

    if args.count < 1:
        print("Error: count must be at least 1")
        sys.exit(1)
    if args.max_free < 1 or args.r_max < 1:
        print("Error: --max-free and --r-max must be at least 1")
        sys.exit(1)

    written = generate_corpus(Path(args.output), args.count, args.seed, args.max_free, args.r_max)
    print(f"[OK] wrote {written} instance(s) to {args.output}")
    if written < args.count:
        sys.exit(1)


if __name__ == "__main__":
    main()
