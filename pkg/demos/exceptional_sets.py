"""Reproduce the exceptional sets for ell < 1000 and show what each forces on n."""

from tauvalues.pipeline import classify_n_for_target, exceptional_sets, power_of_two_scan

sets = exceptional_sets()
for (t, eps), ells in sorted(sets.items()):
    print(f"L_{t}^{'+' if eps > 0 else '-'} = {ells}")
print("total:", sum(len(v) for v in sets.values()))

print("\nshapes of n still allowed:")
for (t, eps), ells in sorted(sets.items()):
    for ell in ells:
        c = classify_n_for_target((eps, t, ell), 10_000, sets)
        seen = f", realized by n = {c['instances']}" if c["instances"] else ""
        print(f"  tau(n) = {eps * t * ell}: {'; '.join(c['shapes'])}{seen}")

print("\nn <= 1e5 with tau(n) = +-2^k, k <= 6:", power_of_two_scan(10**5) or "none")
