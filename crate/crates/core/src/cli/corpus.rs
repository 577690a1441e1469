//! The bundled fixture sessions.

/// `(file name, source)` for every fixture, in a fixed order.
pub const CORPUS: &[(&str, &str)] = &[
  ("torus.pfk", include_str!("../../fixtures/torus.pfk")),
  ("torus_control.pfk", include_str!("../../fixtures/torus_control.pfk")),
  ("contact.pfk", include_str!("../../fixtures/contact.pfk")),
  ("spheres.pfk", include_str!("../../fixtures/spheres.pfk")),
  ("cylinder.pfk", include_str!("../../fixtures/cylinder.pfk")),
  ("obstruction.pfk", include_str!("../../fixtures/obstruction.pfk")),
  ("flat.pfk", include_str!("../../fixtures/flat.pfk")),
  ("affine.pfk", include_str!("../../fixtures/affine.pfk")),
  ("sl2.pfk", include_str!("../../fixtures/sl2.pfk")),
  ("empty.pfk", include_str!("../../fixtures/empty.pfk")),
];

/// Looks a fixture up by file name.
pub fn fixture(name: &str) -> Option<&'static str> { CORPUS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s) }
