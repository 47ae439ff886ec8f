//! Audit dump of a routing table: one `s d cost h1,h2,...` line per ordered
//! pair `s != d`, ascending by `s` then `d`.

use std::io::Write;

use bufferless_core::RoutingTable;

use crate::error::Result;

pub fn write_table<W: Write>(table: &RoutingTable, mut out: W) -> Result<()> {
    let n = table.node_count();
    let mut hops = String::new();
    for s in 0..n {
        for d in (0..n).filter(|&d| d != s) {
            hops.clear();
            for (i, h) in table.next_hops(s, d).iter().enumerate() {
                if i > 0 {
                    hops.push(',');
                }
                hops.push_str(&h.to_string());
            }
            writeln!(out, "{s} {d} {} {hops}", table.cost(s, d))?;
        }
    }
    out.flush()?;
    Ok(())
}
