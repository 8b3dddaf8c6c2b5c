"""Thompson's group F acting on its CAT(0) cube complex: diagrams, distances, boundary flows."""
