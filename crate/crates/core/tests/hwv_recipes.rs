use fockdual::hwv::{check_recipe, HwvRecipe};
use fockdual::weights::enumerate_labels;
use fockdual::{DualPairKind, PairFamily};

#[test]
fn every_recipe_is_a_joint_hwv_with_mapped_weight() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for fam in PairFamily::ALL {
        for l in 1..=2 {
            let pair = DualPairKind::new(fam, l).unwrap();
            for label in enumerate_labels(pair.finite(), 3) {
                for recipe in HwvRecipe::all_for(pair, label.clone()).unwrap() {
                    checked += 1;
                    if let Err(e) = check_recipe(&recipe) {
                        failures.push(format!("{recipe}: {e}"));
                    }
                }
            }
        }
    }
    assert!(failures.is_empty(), "{} of {checked} failed:\n{}", failures.len(), failures.join("\n"));
}
