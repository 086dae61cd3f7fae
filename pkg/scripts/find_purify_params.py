"""Search nonce-curve parameters over F_q for large q with SEA point counting.

Needs cypari2 (not a package dependency). Prints the parameters as JSON in
the shape of a profile's "purify" entry once a curve of prime order q1 with a
twist of prime order q2 turns up.

    python scripts/find_purify_params.py --profile ed25519 --a 1 --b-max 1000
"""

import argparse
import json
import sys
import time

from tedsa.profiles import PurifyParams, _purify_generator, get_profile, is_probable_prime


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--profile", default="ed25519")
    ap.add_argument("--delta", type=int, default=None, help="non-residue; smallest one by default")
    ap.add_argument("--a", type=int, default=1, help="first a to try")
    ap.add_argument("--a-max", type=int, default=1000)
    ap.add_argument("--b-max", type=int, default=1000)
    ap.add_argument("--memory", type=int, default=2 * 10 ** 9, help="PARI stack size in bytes")
    args = ap.parse_args(argv)

    try:
        import cypari2
    except ImportError:
        print("cypari2 is required: pip install cypari2", file=sys.stderr)
        return 2
    pari = cypari2.Pari()
    pari.allocatemem(args.memory)

    q = get_profile(args.profile).q
    delta = args.delta
    if delta is None:
        delta = next(d for d in range(2, 1000) if int(pari(f"kronecker({d},{q})")) == -1)
    start, tried = time.time(), 0
    for a in range(args.a, args.a_max):
        for b in range(1, args.b_max):
            tried += 1
            # early abort: 0 when the order has a small factor
            q1 = int(pari(f"ellsea(ellinit([{a},{b}],{q}),-1)"))
            if not q1:
                continue
            q2 = 2 * q + 2 - q1
            if not (is_probable_prime(q1) and is_probable_prime(q2)):
                continue
            base = _purify_generator(q, delta, a, b, q1, q2)
            params = PurifyParams(q, delta, a, b, q1, q2, base)
            print(json.dumps(params.to_dict(), indent=2))
            print(f"found after {tried} curves in {time.time() - start:.0f}s", file=sys.stderr)
            return 0
    print(f"nothing in the window after {tried} curves", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
