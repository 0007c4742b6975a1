//! DOT rendering of the Hasse diagram of a stable set lattice.

use polarity_core::StableLattice;

/// Nodes are element indices labeled with the underlying subset; edges are
/// the cover pairs, lower element first. Output is deterministic.
pub fn hasse_dot(lat: &StableLattice) -> String {
    let mut out = String::from("digraph stable_lattice {\n");
    out.push_str("  rankdir=BT;\n  node [shape=box];\n");
    for (i, e) in lat.elements().iter().enumerate() {
        let members: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "  n{} [label=\"{}: {{{}}}\"];\n",
            i,
            i,
            members.join(",")
        ));
    }
    for (a, b) in lat.hasse_covers() {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use polarity_core::fixtures;
    use polarity_core::lattice::enumerate_stable;

    #[test]
    fn dot_lists_covers_only() {
        let lat = enumerate_stable(&fixtures::neq3()).unwrap();
        let dot = super::hasse_dot(&lat);
        // 8 nodes, 12 cover edges on the cube, no transitive edge 0 -> 7
        assert_eq!(dot.matches(" -> ").count(), 12);
        assert!(!dot.contains("n0 -> n7"));
    }
}
