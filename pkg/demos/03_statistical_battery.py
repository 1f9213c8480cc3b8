"""Run the 15-test statistical battery and render the pass/fail matrix.

Run:  python3 demos/03_statistical_battery.py
"""

from rngbench.sources import ChaChaParams, LcgParams, chacha20_stream, lcg_stream
from rngbench.sts import render_matrix, run_suite

NBITS = 1_000_000


def main():
    lcg = lcg_stream(LcgParams(a=1664525, c=1013904223, k=32, x0=1), NBITS)
    cc = chacha20_stream(
        ChaChaParams(key=bytes(range(32)), nonce=bytes(12), initial_counter=0), NBITS
    )
    reports = [
        run_suite(lcg, label="lcg", stage="pre"),
        run_suite(cc, label="chacha20", stage="pre"),
    ]
    _, text = render_matrix(reports)
    print(text)
    for rep in reports:
        verdict = "all pass" if rep.all_pass else f"fails {[t.value for t in rep.failing]}"
        print(f"{rep.label}: {verdict}")


if __name__ == "__main__":
    main()
