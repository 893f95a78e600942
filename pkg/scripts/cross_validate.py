"""Cross-validate the simulator, graph decider and power oracle on machine files.

    python3 scripts/cross_validate.py                 # every machine in machines/
    python3 scripts/cross_validate.py m.pm --max-len 5

Prints one row per machine with agreement counts and time spent per method.
Exits 1 if any (machine, word) pair disagrees.
"""
import argparse
import itertools
import sys
import time
from pathlib import Path

from unialg.decider import build_action_graph, decide_nilpotent_graph, power_nilpotency
from unialg.encoding import Word
from unialg.machines import accepts, compile_machine, parse_machine

ROOT = Path(__file__).resolve().parent.parent


def words(alphabet, max_len):
    for n in range(max_len + 1):
        for w in itertools.product(alphabet.letters, repeat=n):
            yield Word(alphabet, w)


def timed(fn, *args):
    start = time.perf_counter()
    value = fn(*args)
    return value, time.perf_counter() - start


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("machines", nargs="*", type=Path)
    p.add_argument("--max-len", type=int, default=4)
    args = p.parse_args(argv)
    paths = args.machines or sorted((ROOT / "machines").glob("*.pm"))

    print(f"{'machine':<10} {'words':>5} {'accepted':>8} {'agree':>5}  {'sim s':>7} {'graph s':>7} {'power s':>7}")
    disagreements = 0
    for path in paths:
        m = parse_machine(path.read_text())
        phi = compile_machine(m)
        n = accepted = agree = 0
        t_sim = t_graph = t_power = 0.0
        for word in words(m.alphabet, args.max_len):
            sim, dt = timed(accepts, m, word)
            t_sim += dt
            graph, dt = timed(lambda: decide_nilpotent_graph(build_action_graph(phi, word), phi))
            t_graph += dt
            power, dt = timed(lambda: power_nilpotency(phi, word).nilpotent)
            t_power += dt
            n += 1
            accepted += sim
            if sim == graph == power:
                agree += 1
            else:
                print(f"  disagreement on {path.stem} {word!s:<8} sim={sim} graph={graph} power={power}")
        disagreements += n - agree
        print(f"{path.stem:<10} {n:>5} {accepted:>8} {agree:>5}  {t_sim:>7.3f} {t_graph:>7.3f} {t_power:>7.3f}")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
