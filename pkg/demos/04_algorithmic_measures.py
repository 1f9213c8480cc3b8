"""LZ-76 complexity and Borel normality on structured vs random streams.

Run:  python3 demos/04_algorithmic_measures.py
"""

from rngbench import from_ascii
from rngbench.measures import borel_normality, kolmogorov_report
from rngbench.sources import LcgParams, lcg_stream, mt19937_bits


def main():
    n = 65536
    periodic = from_ascii("01" * (n // 2))
    small_lcg = lcg_stream(LcgParams(a=13, c=5, k=8, x0=1), n)  # short cycle
    reference = mt19937_bits(0x00C0FFEE, n)

    print(f"{'stream':<12}{'C':>8}{'normalized':>12}{'rel_to_ref':>12}")
    for name, s in (("periodic", periodic), ("lcg_2^8", small_lcg), ("mt_ref", reference)):
        rep = kolmogorov_report(s, seed_ref=reference, seed_label="mt19937")
        print(
            f"{name:<12}{rep.phrase_count:>8}{rep.normalized:>12.4f}"
            f"{rep.relative_to_seed:>12.4f}"
        )

    print("\nBorel normality (bound = 1/log2(N)):")
    for name, s in (("periodic", periodic), ("mt_ref", reference)):
        rep = borel_normality(s, max_level=4)
        cells = " ".join(
            f"m={lv.m}:{'pass' if lv.passed else 'fail'}" for lv in rep.levels
        )
        print(f"  {name:<10} {cells}")


if __name__ == "__main__":
    main()
