//! Writes the catalog sites as JSON documents and reloads them.
//!
//! `cargo run --example site_documents -- [dir]`

use std::path::PathBuf;

use sheaf_forcing::site::{catalog, SiteDocument};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "sites".into()));
    std::fs::create_dir_all(&dir)?;
    for site in catalog::all() {
        let doc = SiteDocument::from_site(&site);
        let path = dir.join(format!("{}.json", site.name));
        std::fs::write(&path, doc.to_json() + "\n")?;
        let back = SiteDocument::read(&path)?.into_site()?;
        for a in site.cat.objects() {
            assert_eq!(back.top.covers(a), site.top.covers(a));
        }
        println!("{} ({} objects, {} arrows)", path.display(), back.cat.num_objects(), back.cat.num_arrows());
    }
    Ok(())
}
