"""
Verification of higher-order constraint logic programs.

Programs are annotated with ``pred`` assertions and *predicate properties*,
named sets of anonymous assertions describing predicates passed as arguments.
:func:`hiord_verify<hiord.verifier.hiord_verify>` decides, per predicate and
property, whether the predicate conforms, encodes the conforming predicates as
regular types and checks every assertion against a goal-dependent analysis.
"""
