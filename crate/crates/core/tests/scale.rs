mod common;

use proptest::prelude::*;

use segviz::scale::{
    brain_palette, make_gradient, parse_palette, resolve_fill, value_range, ColorScale,
    PaletteSpec, ScaleError, DEFAULT_NA_COLOR,
};
use segviz::stats::{join_stats, JoinOptions};
use segviz::{toy, Rgb, Rgba};

use common::{lerp_channel, mock_area_table};

fn rwb() -> ColorScale {
    make_gradient(
        &parse_palette("red=0,white=0.5,blue=1").unwrap(),
        (0.0, 1.0),
    )
    .unwrap()
}

/// Independent piecewise-linear oracle over (breakpoint, rgb) stops.
fn oracle(stops: &[(f64, [u8; 3])], v: f64) -> [u8; 3] {
    let v = v.clamp(stops[0].0, stops[stops.len() - 1].0);
    let k = stops
        .windows(2)
        .position(|w| v <= w[1].0)
        .unwrap_or(stops.len() - 2);
    let (a, b) = (stops[k], stops[k + 1]);
    let t = (v - a.0) / (b.0 - a.0);
    [
        lerp_channel(a.1[0], b.1[0], t),
        lerp_channel(a.1[1], b.1[1], t),
        lerp_channel(a.1[2], b.1[2], t),
    ]
}

#[test]
fn gradient_fixed_points() {
    let s = rwb();
    for (v, hex) in [
        (0.0, "#FF0000"),
        (0.25, "#FF8080"),
        (0.5, "#FFFFFF"),
        (1.0, "#0000FF"),
    ] {
        assert_eq!(
            s.map_value(Some(v)).rgb(),
            Rgb::from_hex(hex).unwrap(),
            "{v}"
        );
    }
    assert_eq!(s.map_value(None), DEFAULT_NA_COLOR.opaque());
    assert_eq!(s.map_value(Some(-3.0)).rgb(), Rgb::new(255, 0, 0));
}

#[test]
fn two_color_gradient_over_data_range() {
    let p = parse_palette("firebrick,goldenrod").unwrap();
    assert_eq!(
        p,
        PaletteSpec::Colors(vec![Rgb::new(0xB2, 0x22, 0x22), Rgb::new(0xDA, 0xA5, 0x20)])
    );
    let s = make_gradient(&p, (0.0, 0.5)).unwrap();
    assert_eq!(s.map_value(Some(0.25)).rgb(), Rgb::new(0xC6, 0x64, 0x21));
}

#[test]
fn palette_errors() {
    assert!(matches!(
        make_gradient(&PaletteSpec::Colors(vec![Rgb::new(0, 0, 0)]), (0.0, 1.0)),
        Err(ScaleError::TooFewColors(1))
    ));
    assert!(matches!(
        make_gradient(&parse_palette("red=1,blue=0").unwrap(), (0.0, 1.0)),
        Err(ScaleError::NotAscending { .. })
    ));
    assert!(parse_palette("notacolor,blue").is_err());
    assert!(matches!(
        make_gradient(&parse_palette("red,blue").unwrap(), (1.0, 1.0)),
        Err(ScaleError::BadRange { .. })
    ));
}

#[test]
fn mock_fills_count() {
    let atlas = toy::cortical_polygon_atlas();
    let join = join_stats(&atlas, &mock_area_table(), JoinOptions::default()).unwrap();
    let range = value_range(&join, "p").unwrap();
    let scale = make_gradient(&parse_palette("firebrick,goldenrod").unwrap(), range).unwrap();
    let fills = resolve_fill(&join, Some("p"), &scale).unwrap();
    assert_eq!(fills.len(), 34);
    assert_eq!(fills.valued_count(), 4);
    assert_eq!(fills.missing.len(), 30);
    assert!(fills
        .missing
        .iter()
        .all(|id| fills.get(id) == Some(DEFAULT_NA_COLOR.opaque())));
}

#[test]
fn na_alpha_lands_in_the_fill() {
    let atlas = toy::cortical_polygon_atlas();
    let join = join_stats(&atlas, &mock_area_table(), JoinOptions::default()).unwrap();
    let scale = rwb().with_na(Rgb::new(0, 0, 0), 0.5).unwrap();
    let fills = resolve_fill(&join, Some("p"), &scale).unwrap();
    let na = fills.get(fills.missing.iter().next().unwrap()).unwrap();
    assert_eq!(na, Rgba::new(0, 0, 0, 128));
    assert!(rwb().with_na(Rgb::new(0, 0, 0), 1.5).is_err());
}

#[test]
fn brain_palette_reproduces_atlas_colors() {
    let atlas = toy::cortical_polygon_atlas();
    let join = join_stats(&atlas, &mock_area_table(), JoinOptions::default()).unwrap();
    let fills = resolve_fill(&join, None, &brain_palette(&atlas).unwrap()).unwrap();
    assert_eq!(fills.valued_count(), 34);
    for r in atlas.region_refs() {
        assert_eq!(fills.get(&r.id), Some(r.color.opaque()));
    }
}

proptest! {
    #[test]
    fn gradient_matches_oracle(
        raw in proptest::collection::vec((any::<u8>(), any::<u8>(), any::<u8>()), 2..6),
        gaps in proptest::collection::vec(0.01f64..10.0, 6),
        start in -100.0f64..100.0,
        probe in 0.0f64..1.0,
    ) {
        let mut at = start;
        let mut stops = Vec::new();
        for (k, &(r, g, b)) in raw.iter().enumerate() {
            if k > 0 {
                at += gaps[k];
            }
            stops.push((at, [r, g, b]));
        }
        let spec = PaletteSpec::Breakpoints(stops.iter().map(|&(a, c)| (Rgb::new(c[0], c[1], c[2]), a)).collect());
        let scale = make_gradient(&spec, (0.0, 1.0)).unwrap();
        let lo = stops[0].0 - 5.0;
        let hi = stops[stops.len() - 1].0 + 5.0;
        let v = lo + probe * (hi - lo);
        prop_assert_eq!(scale.map_value(Some(v)).rgb().channels(), oracle(&stops, v));
        for &(a, c) in &stops {
            prop_assert_eq!(scale.map_value(Some(a)).rgb().channels(), c);
        }
    }

    /// Each channel is monotone between two stops.
    #[test]
    fn two_stop_channels_are_monotone(a in any::<[u8; 3]>(), b in any::<[u8; 3]>(), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let spec = PaletteSpec::Colors(vec![Rgb::new(a[0], a[1], a[2]), Rgb::new(b[0], b[1], b[2])]);
        let s = make_gradient(&spec, (0.0, 1.0)).unwrap();
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let cl = s.map_value(Some(lo)).rgb().channels();
        let ch = s.map_value(Some(hi)).rgb().channels();
        for k in 0..3 {
            if a[k] <= b[k] {
                prop_assert!(cl[k] <= ch[k]);
            } else {
                prop_assert!(cl[k] >= ch[k]);
            }
        }
    }
}
