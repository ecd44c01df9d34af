//! Built-in benchmark problems.

use super::{parse_problem, Ncsp};

const TD: &str = "
problem TD
# Planar two-bar truss; angles eliminated through the member lengths.
var x in [0.01, 10]
var y in [0.01, 10]
let E = 210e6
let T = 235e3
let A = 0.25
let r = 0.5
let P = 400
let H = 6
let L = 10
let TA = T*A
let R1 = P*L/H
let L1 = sqrt((L - x)^2 + (H - y)^2)
let L3 = sqrt(x^2 + (H - y)^2)
let L4 = sqrt(x^2 + y^2)
let F1 = P*L1/(H - y)
let F2 = P*(L - x)/(H - y)
let F3 = (R1 - F2)*L3/x
let F4 = R1*L4/x
let F5 = R1*y/x
let C1 = pi^2*E*r^2/L1^2
let C3 = pi^2*E*r^2/L3^2
let C4 = pi^2*E*r^2/L4^2
constraint F2 < TA
constraint F5 < TA
constraint F1 < C1*A
constraint F1 < TA
constraint F4 < C4*A
constraint F4 < TA
constraint abs(F3) < TA
constraint F3 > 0 or -F3 < C3*A
constraint x < L
constraint y < H
";

const FD: &str = "
problem FD
# Footbridge deck fatigue design.
var L in [10, 30]
var qf in [70, 90]
var Z in [0.1, 10]
let sigma_c = 115000
let gamma = 1.1
let fy = 460000
let years = 200
let alpha = piecewise((L <= 4) -> 1.3; (L <= 7.5) -> 1.3 - 0.1*(L - 4); (L <= 20) -> 0.95 - 0.008*(L - 7.5); (L <= 50) -> 0.85 - (L - 20)/300; else -> 0.75)
let phi = 0.82 + 1.44/(sqrt(L) - 0.2)
let qr = qf*phi
let sigma = qr*L^2/8/(Z/100)
let cycles = 0.05*years
let sigma_r = sigma_c*(min(2.5, cycles/2))^(-1/3)
let resistance = sigma_r/gamma
constraint sigma < fy
constraint alpha*sigma < resistance
";

const WP: &str = "
problem WP
var x in [-50, 50]
var y in [0, 50]
constraint 20 < sqrt(x^2 + y^2) < 50
constraint 12*y/sqrt((x - 12)^2 + y^2) < 10
";

const P1: &str = "
problem P1
var x in [0, 50]
var y in [0, 100]
var z in [0, 50]
constraint 2*x^2 <= 3*y - (y + 1)^0.2 + 5
constraint ln(y^1.5 + 2*y + 1) + 5 <= z + (z + 0.5)^0.1
constraint (x + 1)^1.5 >= 2*sqrt(x)/(3 + sqrt(z^2 + 1))
";

const P2: &str = "
problem P2
var x in [0, 15]
var y in [1, 200]
var z in [-10, 10]
constraint x^2 <= y
constraint ln(y) + 1 >= z
constraint x*z <= 1
";

const P3: &str = "
problem P3
var x in [0, 15]
var y in [1, 200]
var z in [0, 10]
constraint x^2 <= y
constraint ln(y) + 1 >= z
constraint x*z <= 1
constraint x^1.5 + ln(1.5*z + 1) <= y + 1
";

const P4: &str = "
problem P4
var x in [0, 50]
var y in [0, 100]
var z in [0, 50]
constraint x^1.5 + 1.9 <= ln(y^3 + y + 1.5)
constraint ln(y^2 + z + 1) <= z + 2
constraint sqrt(x^2 + z^2 + 12*x + 5) <= 3 + (2*x + 3)^3
";

const G12: &str = "
problem G12
var x1 in [-8, 8]
var x2 in [-8, 8]
var x3 in [-8, 8]
constraint x1^2 + 0.5*x2 + 2*(x3 - 3) >= 0
constraint x1^2 + x2^2 + x3^2 <= 25
";

const H12: &str = "
problem H12
var x1 in [-10, 10]
var x2 in [-10, 10]
var x3 in [-10, 10]
constraint x1^2 + x2^2 + x3^2 <= 36
constraint (x1 - 1)^2 + (x2 - 2)^2 + x3^2 >= 16
constraint x1^2 + (x2 - 0.4)^2 >= 2*x3
";

const F22: &str = "
problem F22
var x in [-4, 4]
var y in [-4, 4]
constraint (x^2 + y^2 + 24*x + 36)^2 <= 64*(x + 3)^3
constraint x^2 + y^2 >= 8
";

const L01: &str = "
problem L01
var x in [0, 50]
var y in [0, 200]
constraint (x + 0.1)*sqrt(y) >= 20 + sqrt(x)
constraint ln(sqrt(y + 1) + 13) + 50 >= (x + 0.5)^1.2
";

const LE1: &str = "
problem LE1
var x in [0, 50]
var y in [0, 50]
constraint exp(x + 1)/exp(sqrt(y + 1)) <= 100*sqrt(x*y + 7) + 30
constraint (x^2 - 3*x + 1)*sqrt(y + 2) >= x*ln(10*y + 3) + 50
";

const S06: &str = "
problem S06
var x in [-50, 50]
var y in [0, 50]
constraint 12*y/sqrt((x - 12)^2 + y^2) <= 10
";

const S08: &str = "
problem S08
var x in [-50, 50]
var y in [0, 50]
constraint 20 <= sqrt(x^2 + y^2) <= 50
";

/// Registry entries in listing order.
pub const SOURCES: &[(&str, &str)] = &[
    ("TD", TD),
    ("FD", FD),
    ("WP", WP),
    ("P1", P1),
    ("P2", P2),
    ("P3", P3),
    ("P4", P4),
    ("G12", G12),
    ("H12", H12),
    ("F22", F22),
    ("L01", L01),
    ("LE1", LE1),
    ("S06", S06),
    ("S08", S08),
];

pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

/// Source text of a benchmark, matched case-insensitively.
pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, s)| *s)
}

pub fn benchmark(name: &str) -> Option<Ncsp> {
    source(name).map(|s| parse_problem(s).expect("built-in benchmark parses"))
}
