"""Write the synthetic demo bundle: corpus, lexicon, stop words, panel, config.

    python scripts/make_demo.py demo/
    epuindex build-index --config demo/config.toml
    epuindex nowcast --config demo/config.toml
"""

import argparse

from epuindex.synthetic import write_demo

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("directory")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--years", type=int, default=30)
    ap.add_argument("--epu-coef", type=float, default=1.0)
    args = ap.parse_args()
    path = write_demo(args.directory, args.seed, args.years, args.epu_coef)
    print(f"demo config: {path}")
