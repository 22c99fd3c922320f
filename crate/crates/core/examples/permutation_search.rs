//! Pruned search for base-10 permutations with small max ψ, ranked by F_2.

use vdc::numeric::{fmt_rational, rat};
use vdc::search::{search, SearchConfig};

fn main() -> vdc::Result<()> {
    let cfg = SearchConfig {
        stage2: true,
        ..SearchConfig::new(10, rat(13, 10))
    };
    let result = search(&cfg)?;
    println!(
        "{} survivors, {} nodes, {} pruned, {} memo hits",
        result.survivors.len(),
        result.stats.nodes,
        result.stats.pruned,
        result.stats.memo_hits
    );
    for s in result.survivors.iter().take(10) {
        let f2 = s.f2_half_max.as_ref().expect("stage 2 enabled");
        println!(
            "{}  max psi = {}  max F_2 / 2 = {}",
            s.perm,
            fmt_rational(&s.max_psi),
            fmt_rational(f2)
        );
    }
    Ok(())
}
