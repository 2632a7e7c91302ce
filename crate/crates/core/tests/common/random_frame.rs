use parsym_core::FrameSpec;
use proptest::prelude::*;

use super::{expression, COORDS};

/// Diagonally dominant frames `I + 0.2·tanh(e_ij)` on `[-1, 1]ⁿ`, so the
/// frame never degenerates.
pub fn random_frame(dim: usize) -> impl Strategy<Value = FrameSpec> {
    proptest::collection::vec(expression(dim), dim * dim).prop_map(move |entries| {
        let rows: Vec<Vec<String>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let e = &entries[i * dim + j];
                        if i == j {
                            format!("1 + 0.2*tanh({e})")
                        } else {
                            format!("0.2*tanh({e})")
                        }
                    })
                    .collect()
            })
            .collect();
        let coords: Vec<String> = COORDS[..dim].iter().map(|s| s.to_string()).collect();
        FrameSpec::new(&coords, &rows, &[] as &[String], &vec![(-1.0, 1.0); dim]).unwrap()
    })
}
