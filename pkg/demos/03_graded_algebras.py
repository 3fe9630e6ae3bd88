"""From a graded algebra to its cocycle, its obstruction, and a repair."""
from vaobstruction.testbed import (
    apply_twist,
    coset_module_build,
    derive_cocycle,
    exterior_algebra_z2,
    obstruction_report,
    super_exterior_z4,
    twisted_group_algebra,
    verify_extension,
)

ext = exterior_algebra_z2()
rep = obstruction_report(ext)
print("exterior algebra extendable:", rep.extendable, rep.notes)

tw = twisted_group_algebra(5)
rep = obstruction_report(tw)
print("twisted Z/5 algebra extendable:", rep.extendable)
print("  before twist:", verify_extension(tw).describe())
fixed = apply_twist(tw, rep.twist)
print("  after twist: ", verify_extension(fixed).describe())
print("  cocycle now trivial:", derive_cocycle(fixed).is_one())

# The trace of Z/4-graded exterior algebra is constant on cosets of {0, 2},
# so the odd coset becomes a module over the even part.
build = coset_module_build(super_exterior_z4(), [(0,), (2,)])
print("coset build on {0, 2}:", build.ok)
