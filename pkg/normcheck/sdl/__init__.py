"""
Standard deontic logic: formulas, Kripke semantics, tableau prover and the Chisholm encodings
"""
