//! Compiled-in systems, selected by name.

use fairstep_core::systems::{BakeryImpl, BakerySpec, BakeryVariant, Relay};

pub const SYSTEM_NAMES: [&str; 6] = [
    "bakery-impl",
    "bakery-impl-m1",
    "bakery-impl-m2",
    "bakery-spec",
    "relay",
    "relay-m3",
];

pub enum Registered {
    Bakery(BakeryImpl),
    BakerySpec(BakerySpec),
    Relay(Relay),
}

pub fn lookup(name: &str) -> Option<Registered> {
    Some(match name {
        "bakery-impl" => Registered::Bakery(BakeryImpl::new()),
        "bakery-impl-m1" => Registered::Bakery(BakeryImpl::with_variant(BakeryVariant::WeakNoblk)),
        "bakery-impl-m2" => Registered::Bakery(BakeryImpl::with_variant(BakeryVariant::ZeroRank)),
        "bakery-spec" => Registered::BakerySpec(BakerySpec),
        "relay" => Registered::Relay(Relay::new()),
        "relay-m3" => Registered::Relay(Relay::symmetric()),
        _ => return None,
    })
}

/// Runs `$body` with `$s` bound to the concrete system.
#[macro_export]
macro_rules! with_system {
    ($reg:expr, $s:ident => $body:expr) => {
        match $reg {
            $crate::registry::Registered::Bakery($s) => $body,
            $crate::registry::Registered::BakerySpec($s) => $body,
            $crate::registry::Registered::Relay($s) => $body,
        }
    };
}
