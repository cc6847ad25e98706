#include "flpaa/distributions.hpp"

#include <algorithm>
#include <cmath>

namespace flpaa {

namespace {

constexpr double kMassSlack = 1e-9;

// E over one uniform segment (a,b) with mass m of |X - y|.
double segment_abs_dev(double a, double b, double m, double y) {
    if (y <= a) return m * ((a + b) / 2.0 - y);
    if (y >= b) return m * (y - (a + b) / 2.0);
    return m * ((y - a) * (y - a) + (b - y) * (b - y)) / (2.0 * (b - a));
}

}  // namespace

PiecewiseUniform::PiecewiseUniform(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) fail(errc::domain, "distribution needs at least one segment");
    double total = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (!(s.lo < s.hi)) fail(errc::domain, "segment must have lo < hi");
        if (!(s.mass > 0.0)) fail(errc::domain, "segment mass must be positive");
        if (i > 0 && s.lo < segments_[i - 1].hi - 1e-15)
            fail(errc::domain, "segments must be sorted with disjoint interiors");
        total += s.mass;
    }
    if (std::abs(total - 1.0) > kMassSlack) fail(errc::domain, "segment masses must sum to one");
    cum_.resize(segments_.size());
    double c = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        segments_[i].mass /= total;
        c += segments_[i].mass;
        cum_[i] = c;
    }
    cum_.back() = 1.0;
}

double PiecewiseUniform::mean() const {
    double m = 0.0;
    for (const Segment& s : segments_) m += s.mass * (s.lo + s.hi) / 2.0;
    return m;
}

double PiecewiseUniform::cdf(double t) const {
    double c = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (t <= s.lo) return c;
        if (t < s.hi) return c + s.mass * (t - s.lo) / (s.hi - s.lo);
        c = cum_[i];
    }
    return 1.0;
}

double PiecewiseUniform::quantile(double p) const {
    if (!(p > 0.0) || p > 1.0) fail(errc::domain, "quantile level must be in (0, 1]");
    double before = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (p <= cum_[i]) return s.lo + (p - before) / s.mass * (s.hi - s.lo);
        before = cum_[i];
    }
    return segments_.back().hi;  // p == 1 up to rounding
}

double PiecewiseUniform::mean_abs_dev(double y) const {
    double r = 0.0;
    for (const Segment& s : segments_) r += segment_abs_dev(s.lo, s.hi, s.mass, y);
    return r;
}

double PiecewiseUniform::abs_dev_below(double z, double y) const {
    double r = 0.0;
    for (const Segment& s : segments_) {
        if (z <= s.lo) break;
        if (z >= s.hi) {
            r += segment_abs_dev(s.lo, s.hi, s.mass, y);
        } else {
            double kept = s.mass * (z - s.lo) / (s.hi - s.lo);
            r += segment_abs_dev(s.lo, z, kept, y);
        }
    }
    return r;
}

double PiecewiseUniform::abs_dev_above(double z, double y) const {
    double r = 0.0;
    for (const Segment& s : segments_) {
        if (z <= s.lo) {
            r += segment_abs_dev(s.lo, s.hi, s.mass, y);
        } else if (z < s.hi) {
            double kept = s.mass * (s.hi - z) / (s.hi - s.lo);
            r += segment_abs_dev(z, s.hi, kept, y);
        }
    }
    return r;
}

PiecewiseUniform PiecewiseUniform::truncated_below(double p) const {
    if (!(p > 0.0) || !(p < 1.0)) fail(errc::domain, "truncation level must be in (0, 1)");
    double z = quantile(p);
    std::vector<Segment> segs;
    for (const Segment& s : segments_) {
        if (z <= s.lo) break;
        if (z >= s.hi) {
            segs.push_back(s);
        } else {
            segs.push_back({s.lo, z, s.mass * (z - s.lo) / (s.hi - s.lo)});
        }
    }
    for (Segment& s : segs) s.mass /= p;
    return PiecewiseUniform(std::move(segs));
}

PiecewiseUniform PiecewiseUniform::truncated_above(double p) const {
    if (!(p > 0.0) || !(p < 1.0)) fail(errc::domain, "truncation level must be in (0, 1)");
    double z = quantile(p);
    std::vector<Segment> segs;
    for (const Segment& s : segments_) {
        if (z <= s.lo) {
            segs.push_back(s);
        } else if (z < s.hi) {
            segs.push_back({z, s.hi, s.mass * (s.hi - z) / (s.hi - s.lo)});
        }
    }
    for (Segment& s : segs) s.mass /= (1.0 - p);
    return PiecewiseUniform(std::move(segs));
}

ConcentrationFamily::ConcentrationFamily(std::vector<Atom> atoms, Side side)
    : atoms_(std::move(atoms)), side_(side) {
    if (atoms_.empty()) fail(errc::invalid_family, "concentration family needs at least one atom");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.point < b.point; });
    double total = 0.0;
    for (const Atom& a : atoms_) {
        if (!(a.weight > 0.0)) fail(errc::invalid_family, "atom weight must be positive");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > kMassSlack) fail(errc::invalid_family, "atom weights must sum to one");
    for (Atom& a : atoms_) a.weight /= total;
}

PiecewiseUniform ConcentrationFamily::realize(long ell) const {
    if (ell < 1) fail(errc::invalid_family, "concentration parameter must be >= 1");
    const double w = 1.0 / static_cast<double>(ell);
    std::vector<Segment> segs;
    segs.reserve(atoms_.size());
    for (const Atom& a : atoms_) {
        double lo, hi;
        switch (side_) {
            case Side::left: lo = a.point - w, hi = a.point; break;
            case Side::right: lo = a.point, hi = a.point + w; break;
            case Side::centered: lo = a.point - w / 2.0, hi = a.point + w / 2.0; break;
            default: lo = hi = a.point; break;
        }
        if (!segs.empty() && lo < segs.back().hi - 1e-15)
            fail(errc::invalid_family, "realized segments overlap; increase ell or separate atoms");
        segs.push_back({lo, hi, a.weight});
    }
    return PiecewiseUniform(std::move(segs));
}

double ConcentrationFamily::limit_abs_dev(double y) const {
    double r = 0.0;
    for (const Atom& a : atoms_) r += a.weight * std::abs(a.point - y);
    return r;
}

}  // namespace flpaa
