use crate::geom::{poly_arc_length, CubicBezier, Point2};
use crate::vessel::{count_bends, ArteryLabel, EdgeId, LabeledNetwork, Side};

use super::LayoutConfig;

fn waves(attach: Point2, n: u32, amplitude: f64, height: f64, first_sign: f64) -> Vec<CubicBezier> {
    let k = amplitude * 4.0 / 3.0;
    // both ends from the same formula so consecutive waves meet exactly
    let y = |i: u32| attach.y + height * i as f64;
    (0..n)
        .map(|i| {
            let sign = if i % 2 == 0 { first_sign } else { -first_sign };
            let (y0, y1) = (y(i), y(i + 1));
            let x = attach.x;
            CubicBezier::new(
                Point2::new(x, y0),
                Point2::new(x + sign * k, y0 + height / 3.0),
                Point2::new(x + sign * k, y0 + height * 2.0 / 3.0),
                Point2::new(x, y1),
            )
        })
        .collect()
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64, target: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `n` alternating lateral half-waves hanging below `attach`, with total
/// arc length `length`. The first wave bulges toward `first_sign`. With
/// `amplitude` 0 the path is a straight vertical drop. When even a flat
/// wave train is longer than `length`, the vertical span is fixed at half
/// the length and the amplitude shrinks to fit.
pub fn inflow_path(
    attach: Point2,
    n: u32,
    amplitude: f64,
    length: f64,
    first_sign: f64,
) -> Vec<CubicBezier> {
    let n = n.max(1);
    let len_at = |a: f64, h: f64| poly_arc_length(&waves(attach, n, a, h, first_sign));
    if len_at(amplitude, 0.0) <= length {
        let h = bisect(0.0, length / n as f64, |h| len_at(amplitude, h), length);
        waves(attach, n, amplitude, h, first_sign)
    } else {
        let h = 0.5 * length / n as f64;
        let a = bisect(0.0, amplitude, |a| len_at(a, h), length);
        waves(attach, n, a, h, first_sign)
    }
}

/// Bend-preserving abstraction of an inflow chain (BA or IC descent).
///
/// The path hangs from the chain's ring end with one half-wave per counted
/// bend (a straight drop for none), and its arc length is the chain's share
/// of `longest`, the longest inflow chain in the scan, times
/// `carotid_band_height`. `attach_at_end` says which end of the edge is on
/// the ring. The returned path runs from the edge's start node to its end
/// node, so the BA path climbs toward the basilar tip.
pub fn abstract_inflow(
    network: &LabeledNetwork,
    edge: EdgeId,
    label: ArteryLabel,
    attach: Point2,
    attach_at_end: bool,
    longest: f64,
    config: &LayoutConfig,
) -> Vec<CubicBezier> {
    let g = network.graph();
    let e = g.edge(edge);
    let bends = count_bends(e, g.forest(), config.bend_noise_fraction).unwrap_or(0);
    let length = if longest > 0.0 {
        config.carotid_band_height * e.chain_length / longest
    } else {
        config.carotid_band_height
    };
    let sign = match label.side() {
        Side::Left => -1.0,
        Side::Right => 1.0,
        Side::Center => {
            let drift = g.node(e.end).position.x - g.node(e.start).position.x;
            if drift < 0.0 {
                -1.0
            } else {
                1.0
            }
        }
    };
    let amplitude = if bends == 0 {
        0.0
    } else {
        config.carotid_amplitude
    };
    let path = inflow_path(attach, bends, amplitude, length, sign);
    if attach_at_end {
        reverse(&path)
    } else {
        path
    }
}

fn reverse(path: &[CubicBezier]) -> Vec<CubicBezier> {
    path.iter()
        .rev()
        .map(|c| {
            let [a, b, cc, d] = c.points;
            CubicBezier::new(d, cc, b, a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_train_hits_target_length() {
        let p = inflow_path(Point2::new(0.0, 0.0), 3, 14.0, 200.0, -1.0);
        assert_eq!(p.len(), 3);
        assert!((poly_arc_length(&p) - 200.0).abs() < 1e-6);
        for w in p.windows(2) {
            assert_eq!(w[0].end(), w[1].start());
        }
        assert!(p[0].points[1].x < 0.0 && p[1].points[1].x > 0.0);
    }

    #[test]
    fn straight_drop() {
        let p = inflow_path(Point2::new(5.0, 10.0), 0, 0.0, 80.0, 1.0);
        assert_eq!(p.len(), 1);
        assert!(p[0].points.iter().all(|q| q.x == 5.0));
        assert!((p[0].end().y - 90.0).abs() < 1e-6);
    }

    #[test]
    fn short_chain_shrinks_amplitude() {
        let p = inflow_path(Point2::new(0.0, 0.0), 5, 14.0, 20.0, 1.0);
        assert!((poly_arc_length(&p) - 20.0).abs() < 1e-6);
    }
}
