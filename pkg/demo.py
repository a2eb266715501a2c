from pypinv.algebra import pinv_direct_sum
from pypinv.identities import InstanceConfig, run_suite, suite_passed
from pypinv.operators import Diagonal, materialize
from pypinv.perturbation import perturbed_pinv
from pypinv.truncation import convergence_study, family_diag_unbounded, probe_harmonic

print(materialize(pinv_direct_sum(Diagonal([1, 2, 3]), Diagonal([0, 2, 3]))))

print(materialize(perturbed_pinv(Diagonal([2.0, 0.0]), Diagonal([0.5, 0.0]))))

for record in convergence_study(family_diag_unbounded(), probe_harmonic(), [4, 8, 16, 32]):
    print(record)

# reports = run_suite(InstanceConfig(seed=42, trials=5))
# print(suite_passed(reports))
