"""Compare encoder variants against brute force on the single-client arbiter specs.

For each (spec, n, k) this prints the brute-force verdict, the verdict of the
phase-guarded encoding (the default) and of the encoding without the guard,
plus the exact maximal satisfaction rate. Rows where the unguarded encoding
disagrees with brute force are marked.
"""
import argparse
import time

from lassynt.cli import resolve_spec
from lassynt.synth import REALIZABLE, SynthConfig, synthesize
from lassynt.tsys import brute_force_max_rate, brute_force_synth

ROWS = [(2, 2), (2, 3), (3, 3), (4, 3)]


def verdict_str(res):
    return res.verdict + (f" ({res.stats.get('refinements')} ref.)" if "refinements" in res.stats else "")


def main():
    ap = argparse.ArgumentParser(description="guarded vs unguarded encoding on greedy1 variants")
    ap.add_argument("--specs", nargs="+", default=["greedy1", "greedy1_fair"])
    ap.add_argument("--timeout", type=float, default=300.0)
    ap.add_argument("--rates", action="store_true", help="also compute exact rates (slow for n=4)")
    args = ap.parse_args()
    print(f"{'spec':<14} {'n':>2} {'k':>2}  {'brute force':<13} {'guarded':<26} {'unguarded':<26} rate")
    for name in args.specs:
        spec = resolve_spec(name)
        for n, k in ROWS:
            t0 = time.time()
            bf = "realizable" if brute_force_synth(spec, n, k) is not None else "unrealizable"
            g = synthesize(spec, n, k, SynthConfig(timeout=args.timeout))
            v = synthesize(spec, n, k, SynthConfig(timeout=args.timeout, phase_guard=False))
            rate = "-"
            if args.rates and n <= 3:
                rate = str(brute_force_max_rate(spec, n, k)[1])
            flag = "  <-- unguarded disagrees" if (v.verdict == REALIZABLE) != (bf == "realizable") else ""
            print(f"{name:<14} {n:>2} {k:>2}  {bf:<13} {verdict_str(g):<26} {verdict_str(v):<26} {rate}"
                  f"{flag}  [{time.time() - t0:.1f}s]", flush=True)


if __name__ == "__main__":
    main()
