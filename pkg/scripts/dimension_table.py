"""Size of the computation space and action graph against word length.

    python3 scripts/dimension_table.py --max-len 6

For each suite machine and word length n, reports the dimension D, the
predicted value (|Sigma|+1) * 2 * |S| * (n+1)^N, the worst edge count over
all words of that length, and the longest deterministic run seen (isometric
observations only).
"""
import argparse
import itertools
import sys
from pathlib import Path

from unialg.decider import Tracer, build_action_graph
from unialg.encoding import Word, expected_dimension, validate_observation
from unialg.flows import is_isometric
from unialg.machines import compile_machine, parse_machine

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-len", type=int, default=4)
    args = p.parse_args(argv)

    print(f"{'machine':<10} {'n':>2} {'D':>6} {'formula':>7} {'edges':>6} {'run':>5}")
    for path in sorted((ROOT / "machines").glob("*.pm")):
        m = parse_machine(path.read_text())
        phi = compile_machine(m)
        params = validate_observation(phi, m.alphabet.letters)
        iso = is_isometric(phi)
        for n in range(args.max_len + 1):
            dim = edges = longest = 0
            for w in itertools.product(m.alphabet.letters, repeat=n):
                word = Word(m.alphabet, w)
                g = build_action_graph(phi, word)
                dim = g.dimension
                edges = max(edges, g.edge_count())
                if iso:
                    tracer = Tracer.build(phi, word)
                    longest = max([longest] + [tracer.trace(v).length for v in g.nodes])
            run = str(longest) if iso else "-"
            print(f"{path.stem:<10} {n:>2} {dim:>6} {expected_dimension(params, n):>7} {edges:>6} {run:>5}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
