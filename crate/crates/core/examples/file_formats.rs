//! Writes every file format to a temporary directory and checks that
//! reloading and re-serializing is byte-identical.

use grouplin::io::{self, FamilyFile, GroupFile, LcFile, SystemFile, TemplateFile};
use grouplin::rational::ratio;
use grouplin::reduction::{build_system, projection_family, ReductionParams, Side};
use grouplin::catalog;

fn main() -> grouplin::Result<()> {
    let dir = std::env::temp_dir().join(format!("grouplin-formats-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let s3 = catalog::group("S3")?;
    io::write_json(&dir.join("s3.json"), &GroupFile::from_group(&s3))?;
    io::write_json(&dir.join("z2.json"), &GroupFile::from_group(&catalog::cyclic(2)))?;
    let mut tf = TemplateFile::from_template(&catalog::template("sign-S3-Z2")?);
    tf.g1 = "s3.json".into();
    tf.g2 = "z2.json".into();
    io::write_json(&dir.join("sign.json"), &tf)?;

    let lc = catalog::lc_one_edge();
    io::write_json(&dir.join("lc.json"), &LcFile::from_instance(&lc))?;
    let t = io::resolve_template("sign.json", &dir)?;
    let system = build_system(&lc, &t, &ReductionParams::exact(ratio(1, 4)))?;
    io::write_json(&dir.join("system.json"), &SystemFile::from_system(&system, "sign.json"))?;
    let family = projection_family(&lc, &t, &[0], &[0], Side::G2);
    io::write_json(&dir.join("family.json"), &FamilyFile::from_family(&lc, &family))?;

    let reloaded = io::load_system(&dir.join("system.json"))?;
    let again = io::canonical(&SystemFile::from_system(&reloaded, "sign.json"))?;
    let original = std::fs::read_to_string(dir.join("system.json"))?;
    println!("system: {} equations, byte-identical round trip: {}", reloaded.equations.len(), again == original);
    let fam = io::load_family(&dir.join("family.json"), &io::load_lc(dir.join("lc.json").to_str().unwrap())?, &t)?;
    println!("family reloaded intact: {}", fam == family);
    for entry in std::fs::read_dir(&dir)? {
        println!("  {}", entry?.path().display());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
