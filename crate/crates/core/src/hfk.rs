//! Knot Floer homology of (1,1) knots (placeholder).
