"""Follow single targets tau(n) = +-ell through every stage of the exclusion."""

from tauvalues.congruence import d_candidates, sieve_prime_power_target
from tauvalues.diophantine import dj_exclude
from tauvalues.pipeline import theorem1_target
from tauvalues.thue import ThueInstance, check_instance

for eps, ell in ((1, 281), (-1, 919), (1, 461), (1, 277), (1, 827)):
    rep, survivors = theorem1_target(eps, ell)
    print(f"\n=== tau(n) = {eps * ell}: {rep.verdict}")
    print(f"  candidate d (prime divisors of ell^2 - 1 besides 2): {d_candidates(ell)}")
    for r in rep.reasons:
        print(f"  - {r.step}")

# the two stages by hand for one target
print("\n--- -919 in detail")
print("  congruence sieve at d = 5 passes:", bool(sieve_prime_power_target(-919, 5)))
cert = dj_exclude(-919, (42, 13))
for b in cert.branches:
    for res in b.results:
        print(f"  branch {b.generator}: q = {res['q']}, period {res['period']}, 11th-power classes {res['classes']}")
print(f"  verdict: {cert.verdict}")

print("\n--- Thue instance (277, 23)")
rep = check_instance(ThueInstance(277, 23, 1), 10_000)
print(f"  {rep.certificate.instance}: {rep.status}, witness {rep.certificate.witness}")
