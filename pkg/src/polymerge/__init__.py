"""Face lattices of polytopes, the merge operation, and explicit constructions."""
