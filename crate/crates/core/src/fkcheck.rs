//! Property FK checks (placeholder).
