"""toposafe: topological safety regions for multi-robot navigation.

Pipeline: simulate crossing scenarios -> persistent-entropy features ->
adjustable SVM classifier -> calibrated safety regions (probabilistic
scaling / conformal prediction) -> global rules and local anchors.
"""

__version__ = "0.1.0"
