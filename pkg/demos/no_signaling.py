"""
Can Alice signal to Bob?
========================

Bob's statistics must not depend on Alice's setting. Entangled tables
pass. Letting Alice erase the correlations by moving her detector does not,
if Bob can watch the joint outcomes.
"""

import numpy as np

from collapse_lab import JointModel, ms_broken_model, no_signaling_audit
from collapse_lab.collapse import correlation, ms_beamsplitter_prediction

m = JointModel.entangled(np.linspace(0, np.pi, 4), [0.0, np.pi / 8])
print("correlations:\n", correlation(m).round(3))
print("entangled audit:", no_signaling_audit(m))

# product of marginals: correlations vanish, each party's marginal survives
decorrelated = ms_beamsplitter_prediction(m, before_before=True)
print("decorrelated correlations:\n", correlation(decorrelated).round(3))
print("decorrelated audit (marginals only):", no_signaling_audit(decorrelated))

print("rest vs before-before, joint view:", no_signaling_audit(ms_broken_model()))
