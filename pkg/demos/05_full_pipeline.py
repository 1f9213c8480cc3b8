"""Config-driven pipeline end to end: validate, run, aggregate.

Equivalent CLI session:
    rngbench validate demo.cfg
    rngbench run demo.cfg --out demo.out
    rngbench report demo.out

Run:  python3 demos/05_full_pipeline.py
"""

import tempfile

from rngbench.bench.aggregate import aggregate
from rngbench.bench.config import parse_config
from rngbench.bench.pipeline import run_pipeline

CONFIG = """
[run]
raw_bits = 400000

[source.lcg_a1c1]
kind = lcg
a = 1664525
c = 1013904223
k = 32
x0 = 1

[source.chacha20]
kind = chacha20
key_hex = 000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f
nonce_hex = 000000090000004a00000000
counter = 1

[extractor]
enabled = true
target_bits = 96000

[measures]
enabled = sts,lz76,borel
stages = pre,post

[predictor_export]
enabled = true
stages = post
"""


def main():
    cfg = parse_config(CONFIG)
    with tempfile.TemporaryDirectory() as out:
        report = run_pipeline(cfg, out)
        print(f"stage errors: {report['stage_errors']}")
        _, text = aggregate([out])
        print(text)


if __name__ == "__main__":
    main()
