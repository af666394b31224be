//! Substitutions used throughout the docs and tests, shipped as data files.

use crate::subst::Substitution;

macro_rules! fixture {
    ($name:ident, $file:literal) => {
        pub fn $name() -> Substitution {
            Substitution::from_json(include_str!(concat!("../data/", $file))).expect($file)
        }
    };
}

fixture!(thue_morse, "thue_morse.json");
fixture!(cyclic, "cyclic.json");
fixture!(periodic, "periodic.json");
fixture!(quaternion, "quaternion.json");
fixture!(square_thue_morse, "square_thue_morse.json");
fixture!(thue_morse_4x2, "thue_morse_4x2.json");
fixture!(rect_2x5, "rect_2x5.json");
fixture!(epsilon_3d, "eps3d.json");
fixture!(s4_cube, "s4_cube.json");
