//! Small towers used throughout the tests and documentation.
//!
//! * `F2`: the free group on `x, y`.
//! * `T1`: `t^-1 (xy) t = xy`, rank 2.
//! * `T2`: `t^-1 (xxy) t = xyy`, rank 2.
//! * `T3`: `T1` extended by `s` centralizing `<xy, t>`, rank 3.
//! * `T2_BROKEN`: `T2` with the image word replaced by `xy`.

use crate::tower::TowerPresentation;

pub const F2: &str = include_str!("../fixtures/f2.json");
pub const T1: &str = include_str!("../fixtures/t1.json");
pub const T2: &str = include_str!("../fixtures/t2.json");
pub const T3: &str = include_str!("../fixtures/t3.json");
pub const T2_BROKEN: &str = include_str!("../fixtures/t2_broken.json");

fn load(text: &str) -> TowerPresentation {
    TowerPresentation::parse_str(text).expect("fixture parses")
}

pub fn f2() -> TowerPresentation {
    load(F2)
}

pub fn t1() -> TowerPresentation {
    load(T1)
}

pub fn t2() -> TowerPresentation {
    load(T2)
}

pub fn t3() -> TowerPresentation {
    load(T3)
}

pub fn t2_broken() -> TowerPresentation {
    load(T2_BROKEN)
}

/// The four valid fixtures by name.
pub fn valid() -> Vec<(&'static str, TowerPresentation)> {
    vec![("F2", f2()), ("T1", t1()), ("T2", t2()), ("T3", t3())]
}

pub fn all_sources() -> Vec<(&'static str, &'static str)> {
    vec![("F2", F2), ("T1", T1), ("T2", T2), ("T3", T3), ("T2_BROKEN", T2_BROKEN)]
}
