"""Exact tau(p) for small primes and the first p with tau(p) = +-2ell, +-4ell, +-8ell."""

from tauvalues.arith import factor
from tauvalues.pipeline import first_examples
from tauvalues.tau import expand_delta, is_ordinary

table = expand_delta(5000)
for n in (1, 2, 3, 4, 5, 11, 23):
    print(f"tau({n}) = {table[n]}")

print("\nprimes p < 5000 with p | tau(p):", [p for p in (2, 3, 5, 7, 2411) if not is_ordinary(p, table)])

print("\nfirst examples:")
for (sign, t), hits in first_examples(5000, per_shape=2).items():
    for h in hits:
        f = factor(table[h.p])
        print(f"  {h}    (tau({h.p}) = {f}, certified: {f.certified})")
