// Terrain in and strategies out: a synthetic SRTM3 tile with voids, an
// ASCII grid, a scenario file pointing at the tile, and the GeoJSON/SVG
// exports of the solved strategy read back.
//
// `cargo run --release --example file_formats`

use ambush::environment::HeightGrid;
use ambush::io::ascii_grid::{read_ascii_grid, write_ascii_grid};
use ambush::io::export::{export_geojson, export_svg, read_geojson_flows};
use ambush::io::hgt::{read_hgt_file, write_hgt, HgtResolution, VOID};
use ambush::io::scenario::read_scenario_file;
use ambush::pipeline::build_instance;

pub fn synthetic_tile() -> Result<Vec<u8>, ambush::Error> {
    let res = HgtResolution::Srtm3;
    let n = res.samples();
    let spacing = res.spacing_at(43.5);
    let grid = HeightGrid::from_fn(n, n, spacing, |x, y| {
        (200.0 + 150.0 * (x / 20_000.0).sin() * (y / 30_000.0).cos()).round()
    })?;
    let mut bytes = write_hgt(&grid, res)?;
    for idx in [n * 600 + 600, n * 600 + 601, n * 10 + 1000] {
        bytes[2 * idx..2 * idx + 2].copy_from_slice(&VOID.to_be_bytes());
    }
    Ok(bytes)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("ambush-file-formats");
    std::fs::create_dir_all(&dir)?;

    let bytes = synthetic_tile()?;
    let tile = dir.join("N43E007.hgt");
    std::fs::write(&tile, &bytes)?;
    let grid = read_hgt_file(&tile)?;
    let again = write_hgt(&grid, HgtResolution::Srtm3)?;
    println!(
        "hgt: {}x{} posts, spacing {:.2} m, {} voids, rewrite bit-exact: {}",
        grid.rows(),
        grid.cols(),
        grid.spacing(),
        grid.void_count(),
        again == bytes
    );

    let small = HeightGrid::from_fn(4, 5, 30.0, |x, y| x + 2.0 * y)?;
    let text = write_ascii_grid(&small);
    let back = read_ascii_grid(&text)?;
    println!("ascii grid: {} bytes, round trip equal: {}", text.len(), back == small);

    let scenario_path = dir.join("scenario.json");
    std::fs::write(
        &scenario_path,
        r#"{
  "source": {"heightmap": "N43E007.hgt"},
  "origin": [20000.0, 50000.0],
  "destination": [80000.0, 50000.0],
  "vehicle": "car",
  "reach": 15000.0,
  "n_nodes": 100
}
"#,
    )?;
    let scenario = read_scenario_file(&scenario_path)?;
    let instance = build_instance(&scenario)?;
    println!("scenario: filled {} void posts", instance.filled_voids);
    let solution = instance.solve()?;
    println!("solved: z* = {:.4}, E = {:.0} m", solution.strategy.z_star, solution.metrics.energy);

    let view = instance.view(&solution);
    let geojson = export_geojson(&view);
    let flows = read_geojson_flows(&geojson)?;
    let worst = flows
        .iter()
        .zip(&solution.strategy.p)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("geojson: {} edges, largest flow round-trip error {worst:.1e}", flows.len());
    let svg = export_svg(&view);
    std::fs::write(dir.join("strategy.svg"), &svg)?;
    std::fs::write(dir.join("strategy.geojson"), &geojson)?;
    println!("svg: {} bytes, files in {}", svg.len(), dir.display());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
