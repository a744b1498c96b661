use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use segviz::atlas::{parse_atlas, serialize_atlas, MeshHemi};
use segviz::fsformat::{write_annot, write_surface};
use segviz::render3d::parse_scene;
use segviz::{toy, Atlas};

const MOCK_CSV: &str =
    "area,p\ntransverse temporal,0.012\ninsula,0.301\npre central,0.045\nsuperior parietal,0.47\n";

fn segviz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segviz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Fixtures {
        let dir = tempfile::tempdir().unwrap();
        let f = Fixtures { dir };
        f.write(
            "poly.json",
            &serialize_atlas(&Atlas::Polygon(toy::cortical_polygon_atlas())),
        );
        f.write(
            "subpoly.json",
            &serialize_atlas(&Atlas::Polygon(toy::subcortical_polygon_atlas())),
        );
        f.write(
            "mesh.json",
            &serialize_atlas(&Atlas::Mesh(toy::cortical_mesh_atlas(2))),
        );
        f.write(
            "submesh.json",
            &serialize_atlas(&Atlas::Mesh(toy::subcortical_mesh_atlas())),
        );
        f.write("mock.csv", MOCK_CSV.as_bytes());
        f
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }

    fn write(&self, name: &str, bytes: &[u8]) {
        fs::write(self.path(name), bytes).unwrap();
    }

    fn run(&self, args: &[&str]) -> Output {
        let owned: Vec<String> = args
            .iter()
            .map(|a| {
                a.strip_prefix('@')
                    .map_or_else(|| a.to_string(), |n| self.arg(n))
            })
            .collect();
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        segviz(&refs)
    }
}

fn assert_user_error(o: &Output, needle: &str) {
    assert_eq!(o.status.code(), Some(1), "stderr: {}", stderr(o));
    let err = stderr(o);
    assert!(err.contains(needle), "{needle:?} not in {err:?}");
    assert!(!err.contains("panicked") && !err.contains("stack backtrace"));
}

#[test]
fn help_and_version_exit_zero() {
    for args in [
        &["--help"][..],
        &["--version"],
        &["plot2d", "--help"],
        &["make-atlas-2d", "--help"],
    ] {
        let o = segviz(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn unknown_subcommand_and_flag_are_user_errors() {
    let o = segviz(&["frobnicate"]);
    assert_user_error(&o, "Usage");
    let f = Fixtures::new();
    let o = f.run(&["inspect", "@poly.json", "--bogus"]);
    assert_user_error(&o, "--bogus");
    assert!(o.stdout.is_empty());
}

#[test]
fn inspect_polygon_and_mesh() {
    let f = Fixtures::new();
    let o = f.run(&["inspect", "@poly.json"]);
    assert_eq!(o.status.code(), Some(0));
    let atlas = toy::cortical_polygon_atlas();
    let text = stdout(&o);
    assert!(text.contains("kind: cortical"));
    assert!(text.contains(&format!("regions: {}", atlas.region_refs().len())));
    assert!(text.contains(&format!("pieces: {}", atlas.piece_count())));

    let o = f.run(&["inspect", "@mesh.json"]);
    let text = stdout(&o);
    assert!(text.contains("format: gatlas-mesh/1"));
    assert!(text.contains("semi_inflated/left: 2 regions"));
}

#[test]
fn inspect_reports_bad_documents() {
    let f = Fixtures::new();
    f.write("broken.json", b"{\"format\": ");
    assert_user_error(&f.run(&["inspect", "@broken.json"]), "syntax error at byte");
    assert_user_error(&f.run(&["inspect", "@missing.json"]), "missing.json");
}

#[test]
fn join_check_mock_table() {
    let f = Fixtures::new();
    let o = f.run(&[
        "join-check",
        "--atlas",
        "@poly.json",
        "--stats",
        "@mock.csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("4 matched, 0 unmatched"), "{text}");
    assert!(text.contains("column p: 4 of 34 regions valued"), "{text}");
}

#[test]
fn join_check_strict_names_the_row() {
    let f = Fixtures::new();
    f.write("stray.csv", b"area,p\ninsula,0.3\nnowhere,0.1\n");
    let lenient = f.run(&[
        "join-check",
        "--atlas",
        "@poly.json",
        "--stats",
        "@stray.csv",
    ]);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(stdout(&lenient).contains("unmatched row 2: nowhere"));
    let strict = f.run(&[
        "join-check",
        "--atlas",
        "@poly.json",
        "--stats",
        "@stray.csv",
        "--strict",
    ]);
    assert_user_error(&strict, "row 2");
}

#[test]
fn join_check_wide_table() {
    let f = Fixtures::new();
    f.write(
        "wide.csv",
        b"subject,insula,cuneus\ns1,2.5,2.1\ns2,2.7,NA\n",
    );
    let o = f.run(&[
        "join-check",
        "--atlas",
        "@poly.json",
        "--stats",
        "@wide.csv",
        "--wide",
        "--id-cols",
        "subject",
        "--key-name",
        "area",
        "--value-name",
        "thickness",
        "--group-col",
        "subject",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("[s1] 2 matched"), "{text}");
    assert!(text.contains("[s2] column thickness: 1 of 34"), "{text}");
}

#[test]
fn plot2d_writes_deterministic_svg() {
    let f = Fixtures::new();
    let args = [
        "plot2d",
        "--atlas",
        "@poly.json",
        "--stats",
        "@mock.csv",
        "--value",
        "p",
        "--palette",
        "firebrick,goldenrod",
    ];
    let a = f.run(&[&args[..], &["--out", "@a.svg"]].concat());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let b = f.run(&[&args[..], &["--out", "@b.svg"]].concat());
    assert_eq!(b.status.code(), Some(0));
    let svg = fs::read(f.path("a.svg")).unwrap();
    assert_eq!(svg, fs::read(f.path("b.svg")).unwrap());
    assert!(a.stdout.is_empty());
    let paths = String::from_utf8(svg).unwrap().matches("<path").count();
    assert_eq!(paths, toy::cortical_polygon_atlas().piece_count());
}

#[test]
fn plot2d_facets_and_filters() {
    let f = Fixtures::new();
    f.write(
        "groups.csv",
        b"area,AgeG,p\ninsula,Young,0.1\ninsula,Old,0.2\n",
    );
    let o = f.run(&[
        "plot2d",
        "--atlas",
        "@poly.json",
        "--stats",
        "@groups.csv",
        "--group-col",
        "AgeG",
        "--ncol",
        "1",
        "--hemisphere",
        "left",
        "--view",
        "lateral",
        "--out",
        "@g.svg",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = fs::read_to_string(f.path("g.svg")).unwrap();
    assert!(svg.contains(">Young<") && svg.contains(">Old<"));
}

#[test]
fn plot2d_subcortical_hemisphere_guard() {
    let f = Fixtures::new();
    let o = f.run(&[
        "plot2d",
        "--atlas",
        "@subpoly.json",
        "--hemisphere",
        "left",
        "--out",
        "@x.svg",
    ]);
    assert_user_error(&o, "no option to show only a single hemisphere");
    assert!(!f.path("x.svg").exists());
}

#[test]
fn plot2d_bad_palette_and_value() {
    let f = Fixtures::new();
    let base = [
        "plot2d",
        "--atlas",
        "@poly.json",
        "--stats",
        "@mock.csv",
        "--out",
        "@x.svg",
    ];
    assert_user_error(
        &f.run(&[&base[..], &["--palette", "notacolor,blue"]].concat()),
        "--palette",
    );
    assert_user_error(&f.run(&[&base[..], &["--value", "q"]].concat()), "--value");
    assert_user_error(
        &f.run(&[&base[..], &["--position", "sideways"]].concat()),
        "sideways",
    );
    assert!(!f.path("x.svg").exists());
}

#[test]
fn plot3d_png_and_scene() {
    let f = Fixtures::new();
    f.write(
        "mesh.csv",
        b"area,hemi,p\nsuperior,left,0.2\ninferior,right,0.4\n",
    );
    let o = f.run(&[
        "plot3d",
        "--atlas",
        "@mesh.json",
        "--stats",
        "@mesh.csv",
        "--camera",
        "right lateral",
        "--glass",
        "left",
        "--width",
        "40",
        "--height",
        "30",
        "--out",
        "@s.png",
        "--out",
        "@s.json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(&fs::read(f.path("s.png")).unwrap()[1..4], b"PNG");
    let scene = parse_scene(&fs::read(f.path("s.json")).unwrap()).unwrap();
    assert!(scene.items.iter().any(|i| i.label == "glassbrain_left"));
    assert_eq!(scene.items.len(), 5);
}

#[test]
fn plot3d_subcortical_na_alpha() {
    let f = Fixtures::new();
    let o = f.run(&[
        "plot3d",
        "--atlas",
        "@submesh.json",
        "--na-alpha",
        "0.5",
        "--out",
        "@sub.json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let scene = parse_scene(&fs::read(f.path("sub.json")).unwrap()).unwrap();
    assert!(!scene.items.is_empty());
    assert_user_error(
        &f.run(&[
            "plot3d",
            "--atlas",
            "@submesh.json",
            "--camera",
            "sideways",
            "--out",
            "@x.png",
        ]),
        "sideways",
    );
}

fn write_binaries(f: &Fixtures) {
    for (hemi, name) in [(MeshHemi::Left, "lh"), (MeshHemi::Right, "rh")] {
        let (surface, annot) = toy::two_label_hemisphere(2, hemi);
        f.write(&format!("{name}.white"), &write_surface(&surface));
        f.write(&format!("{name}.aparc.annot"), &write_annot(&annot));
    }
}

#[test]
fn convert_then_make_atlas_2d() {
    let f = Fixtures::new();
    write_binaries(&f);
    let o = f.run(&[
        "convert",
        "--surface",
        "@lh.white",
        "--annot",
        "@lh.aparc.annot",
        "--surface",
        "@rh.white",
        "--annot",
        "@rh.aparc.annot",
        "--name",
        "toy",
        "--out",
        "@built.json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let built = parse_atlas(&fs::read(f.path("built.json")).unwrap()).unwrap();
    assert_eq!(
        built,
        Atlas::Mesh(toy::cortical_mesh_atlas(2)).with_name("toy")
    );

    let o = f.run(&[
        "make-atlas-2d",
        "--mesh-atlas",
        "@built.json",
        "--size",
        "96",
        "--epsilon",
        "1.0",
        "--out",
        "@poly2.json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    match parse_atlas(&fs::read(f.path("poly2.json")).unwrap()).unwrap() {
        Atlas::Polygon(p) => assert_eq!(p.region_refs().len(), 4),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn convert_needs_a_hemisphere() {
    let f = Fixtures::new();
    write_binaries(&f);
    fs::copy(f.path("lh.white"), f.path("brain.white")).unwrap();
    let o = f.run(&[
        "convert",
        "--surface",
        "@brain.white",
        "--annot",
        "@lh.aparc.annot",
        "--out",
        "@x.json",
    ]);
    assert_user_error(&o, "--hemi");
    let o = f.run(&[
        "convert",
        "--surface",
        "@brain.white",
        "--annot",
        "@lh.aparc.annot",
        "--hemi",
        "left",
        "--out",
        "@x.json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_user_error(
        &f.run(&[
            "convert",
            "--surface",
            "@lh.white",
            "--annot",
            "@rh.white",
            "--out",
            "@y.json",
        ]),
        "--annot",
    );
}

#[test]
fn make_atlas_2d_rejects_bad_epsilon_and_subcortical() {
    let f = Fixtures::new();
    assert_user_error(
        &f.run(&[
            "make-atlas-2d",
            "--mesh-atlas",
            "@mesh.json",
            "--epsilon",
            "-1",
            "--out",
            "@x.json",
        ]),
        "psilon",
    );
    assert_user_error(
        &f.run(&[
            "make-atlas-2d",
            "--mesh-atlas",
            "@submesh.json",
            "--out",
            "@x.json",
        ]),
        "make-atlas-2d",
    );
    assert_user_error(
        &f.run(&[
            "make-atlas-2d",
            "--mesh-atlas",
            "@poly.json",
            "--out",
            "@x.json",
        ]),
        "expected a mesh atlas",
    );
    assert!(!f.path("x.json").exists());
}

trait WithName {
    fn with_name(self, name: &str) -> Self;
}

impl WithName for Atlas {
    fn with_name(self, name: &str) -> Self {
        match self {
            Atlas::Mesh(mut m) => {
                m.name = name.into();
                Atlas::Mesh(m)
            }
            Atlas::Polygon(mut p) => {
                p.name = name.into();
                Atlas::Polygon(p)
            }
        }
    }
}
