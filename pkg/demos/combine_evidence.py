"""
Combining evidence with Dempster's rule
=======================================

Two studies report opposite effects of the same intervention.  We encode
each as a simple support function, combine them and read off the result.
"""

from ssm_loom import HypothesisSet, SimpleSupport, belief_of, combine, decide_intensity, from_simple_support

# one study says strongly positive with belief 0.6, another strongly negative with 0.5
sp = from_simple_support(SimpleSupport(HypothesisSet.of("SP"), 0.6))
sn = from_simple_support(SimpleSupport(HypothesisSet.of("SN"), 0.5))
print("first :", sp)
print("second:", sn)

# K is the mass the two bodies of evidence put on contradictory outcomes
result = combine(sp, sn)
print("conflict K =", round(result.conflict, 4))
print("combined   =", result.combined)

# the reported intensity is the heaviest focal element other than the frame
intensity, belief = decide_intensity(result.combined)
print("reported   =", intensity, round(belief, 4))

# agreeing evidence reinforces: 1 - (1 - 0.5)^3
agree = from_simple_support(SimpleSupport(HypothesisSet.of("SP"), 0.5))
triple = combine(combine(agree, agree).combined, agree).combined
print("three agreeing 0.5 supports ->", belief_of(triple, HypothesisSet.of("SP")))
