"""Rank-metric codes over finite fields: duality, MacWilliams transforms, MRD codes and matrix counting."""
