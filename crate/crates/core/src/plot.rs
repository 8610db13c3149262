//! Deterministic SVG pictures of spectral regions with spectra overlaid.
//!
//! Output depends only on the inputs: coordinates are printed with three
//! decimals and nothing (timestamps, ids) varies between runs.

use std::fmt::Write as _;

use crate::jointspec::JointSpectrum;
use crate::regions::RegionId;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 6] = ["#4c78a8", "#f58518", "#54a24b", "#b279a2", "#e45756", "#72b7b2"];

struct Frame {
    extent: f64,
}

impl Frame {
    fn x(&self, s: f64) -> f64 {
        MARGIN + s / self.extent * (SIZE - 2.0 * MARGIN)
    }

    fn y(&self, t: f64) -> f64 {
        SIZE - MARGIN - t / self.extent * (SIZE - 2.0 * MARGIN)
    }

    fn radius(&self) -> f64 {
        self.x(1.0) - self.x(0.0)
    }
}

fn f3(x: f64) -> String {
    format!("{x:.3}")
}

/// Pieces of a region: filled paths, stroked curves.
enum Piece {
    QuarterDisk,
    OutsideDisk,
    /// `[1, ∞) × ℝ₊`.
    RightStrip,
    /// Outside the disk with `s ≤ 1`.
    OutsideDiskLeftOfOne,
    Arc,
    AxisRay,
    LineSOne,
}

fn pieces(region: RegionId) -> Vec<Piece> {
    use Piece::*;
    match region.resolve() {
        RegionId::Subnormal => vec![QuarterDisk, AxisRay],
        RegionId::Contraction | RegionId::MContractive(1) => vec![QuarterDisk],
        RegionId::Expansion | RegionId::MExpansive(1) => vec![OutsideDisk],
        RegionId::Isometry | RegionId::MIsometric(1) => vec![Arc],
        RegionId::TwoIsometry | RegionId::MIsometric(_) => vec![Arc, LineSOne],
        RegionId::MContractive(m) if m % 2 == 1 => vec![QuarterDisk, LineSOne],
        RegionId::MContractive(_) => vec![QuarterDisk, RightStrip],
        RegionId::MExpansive(m) if m % 2 == 1 => vec![OutsideDisk],
        RegionId::MExpansive(_) => vec![OutsideDiskLeftOfOne],
        RegionId::DualSubnormal => vec![OutsideDisk, AxisRay],
        _ => unreachable!("aliases are resolved"),
    }
}

fn draw_piece(out: &mut String, f: &Frame, piece: &Piece, color: &str) {
    let (x0, y0, x1, y1) = (f3(f.x(0.0)), f3(f.y(0.0)), f3(f.x(1.0)), f3(f.y(1.0)));
    let (xe, ye) = (f3(f.x(f.extent)), f3(f.y(f.extent)));
    let r = f3(f.radius());
    let fill = format!(r#"fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="1""#);
    let stroke = format!(r#"fill="none" stroke="{color}" stroke-width="3""#);
    let quarter = format!("M {x0} {y0} L {x1} {y0} A {r} {r} 0 0 0 {x0} {y1} Z");
    let _ = match piece {
        Piece::QuarterDisk => writeln!(out, r#"  <path d="{quarter}" {fill}/>"#),
        Piece::OutsideDisk => writeln!(
            out,
            r#"  <path d="M {x0} {y0} L {xe} {y0} L {xe} {ye} L {x0} {ye} Z {quarter}" fill-rule="evenodd" {fill}/>"#
        ),
        Piece::RightStrip => writeln!(out, r#"  <path d="M {x1} {y0} L {xe} {y0} L {xe} {ye} L {x1} {ye} Z" {fill}/>"#),
        Piece::OutsideDiskLeftOfOne => writeln!(
            out,
            r#"  <path d="M {x1} {y0} L {x1} {ye} L {x0} {ye} L {x0} {y1} A {r} {r} 0 0 1 {x1} {y0} Z" {fill}/>"#
        ),
        Piece::Arc => writeln!(out, r#"  <path d="M {x1} {y0} A {r} {r} 0 0 0 {x0} {y1}" {stroke}/>"#),
        Piece::AxisRay => writeln!(out, r#"  <line x1="{x0}" y1="{y0}" x2="{xe}" y2="{y0}" {stroke}/>"#),
        Piece::LineSOne => writeln!(out, r#"  <line x1="{x1}" y1="{y0}" x2="{x1}" y2="{ye}" {stroke}/>"#),
    };
}

/// Renders `regions` over `[0, D]²` (`D ≥ 2`, grown to fit the spectrum) with
/// the spectrum points as circles. More than one region adds a legend.
pub fn render_svg(regions: &[RegionId], sigma: Option<&JointSpectrum>) -> String {
    let far = sigma
        .map(|s| s.points().iter().map(|p| p.s.max(p.t)).fold(0.0, f64::max))
        .unwrap_or(0.0);
    let extent = ((far * 1.1) / 0.5).ceil().max(4.0) * 0.5;
    let f = Frame { extent };
    let mut out = String::new();
    let size = f3(SIZE);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"  <rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#);
    for (i, region) in regions.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(out, r#"  <g id="region-{i}" data-region="{region}">"#);
        for piece in pieces(*region) {
            draw_piece(&mut out, &f, &piece, color);
        }
        let _ = writeln!(out, "  </g>");
    }
    let (x0, y0, xe, ye) = (f3(f.x(0.0)), f3(f.y(0.0)), f3(f.x(extent)), f3(f.y(extent)));
    let _ = writeln!(out, r#"  <line x1="{x0}" y1="{y0}" x2="{xe}" y2="{y0}" stroke="black" stroke-width="1"/>"#);
    let _ = writeln!(out, r#"  <line x1="{x0}" y1="{y0}" x2="{x0}" y2="{ye}" stroke="black" stroke-width="1"/>"#);
    let _ = writeln!(
        out,
        r#"  <text x="{}" y="{}" font-size="14" font-family="serif">s</text>"#,
        f3(f.x(extent) + 8.0),
        f3(f.y(0.0) + 4.0)
    );
    let _ = writeln!(
        out,
        r#"  <text x="{}" y="{}" font-size="14" font-family="serif">t</text>"#,
        f3(f.x(0.0) - 4.0),
        f3(f.y(extent) - 8.0)
    );
    let _ = writeln!(
        out,
        r#"  <text x="{}" y="{}" font-size="12" font-family="serif" text-anchor="middle">1</text>"#,
        f3(f.x(1.0)),
        f3(f.y(0.0) + 16.0)
    );
    let _ = writeln!(
        out,
        r#"  <text x="{}" y="{}" font-size="12" font-family="serif" text-anchor="end">1</text>"#,
        f3(f.x(0.0) - 6.0),
        f3(f.y(1.0) + 4.0)
    );
    if let Some(sigma) = sigma {
        for p in sigma.points() {
            let _ = writeln!(
                out,
                r#"  <circle cx="{}" cy="{}" r="3.000" fill="black"/>"#,
                f3(f.x(p.s)),
                f3(f.y(p.t))
            );
        }
    }
    if regions.len() > 1 {
        for (i, region) in regions.iter().enumerate() {
            let y = MARGIN + 16.0 * i as f64;
            let color = PALETTE[i % PALETTE.len()];
            let _ = writeln!(
                out,
                r#"  <rect x="{}" y="{}" width="10.000" height="10.000" fill="{color}"/>"#,
                f3(SIZE - 150.0),
                f3(y - 9.0)
            );
            let _ = writeln!(
                out,
                r#"  <text x="{}" y="{}" font-size="12" font-family="sans-serif">{region}</text>"#,
                f3(SIZE - 135.0),
                f3(y)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
