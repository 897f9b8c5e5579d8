//! Scenarios shipped with the binary.

pub struct Builtin {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
}

pub const BUILTINS: [Builtin; 5] = [
    Builtin {
        name: "harmonic",
        summary: "H = (x1^2 + p1^2)/2 with no terms; energy and classical reduction",
        source: include_str!("../scenarios/harmonic.json"),
    },
    Builtin {
        name: "damped",
        summary: "harmonic H with mu = -0.1*p1, v = x1; energy balance against the closed form",
        source: include_str!("../scenarios/damped.json"),
    },
    Builtin {
        name: "rotating_frame",
        summary: "free particle seen from a unit-rate rotating frame; integrability of v = dx/dt + wx",
        source: include_str!("../scenarios/rotating_frame.json"),
    },
    Builtin {
        name: "free_hj",
        summary: "free particle with complete integral S = 2*x1 - 2*t",
        source: include_str!("../scenarios/free_hj.json"),
    },
    Builtin {
        name: "legendre_quadratic",
        summary: "two-dimensional convex quadratic Lagrangian against its hand-derived Hamiltonian",
        source: include_str!("../scenarios/legendre_quadratic.json"),
    },
];

pub fn find(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}
