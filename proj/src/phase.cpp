#include "cars/phase.hpp"

#include <algorithm>
#include <cmath>

#include "cars/errors.hpp"
#include "cars/units.hpp"

namespace cars {

namespace {

void validate(const PhaseProfile::Shape& shape) {
    if (const auto* arc = std::get_if<ArctanPhase>(&shape)) {
        if (!(arc->width > 0.0)) throw ConfigError("ArctanPhase: width must be > 0");
    } else if (const auto* mod = std::get_if<ModifiedArctanPhase>(&shape)) {
        if (!(mod->width > 0.0)) throw ConfigError("ModifiedArctanPhase: width must be > 0");
        if (!std::isfinite(mod->denom_coeff)) throw ConfigError("ModifiedArctanPhase: non-finite coefficient");
    } else if (const auto* step = std::get_if<PiStepPhase>(&shape)) {
        if (!std::is_sorted(step->positions.begin(), step->positions.end()))
            throw ConfigError("PiStepPhase: step positions must be sorted ascending");
    } else if (const auto* tab = std::get_if<TabulatedPhase>(&shape)) {
        if (tab->node_offsets.size() != tab->node_values.size())
            throw ConfigError("TabulatedPhase: offsets/values size mismatch");
        if (tab->node_offsets.empty()) throw ConfigError("TabulatedPhase: empty node table");
        for (std::size_t i = 1; i < tab->node_offsets.size(); ++i)
            if (!(tab->node_offsets[i] > tab->node_offsets[i - 1]))
                throw ConfigError("TabulatedPhase: node offsets must be strictly increasing");
        for (double v : tab->node_values)
            if (!std::isfinite(v)) throw ConfigError("TabulatedPhase: non-finite node value");
    }
}

struct Evaluator {
    double w;

    double operator()(const ZeroPhase&) const { return 0.0; }

    double operator()(const LinearPhase& p) const { return p.slope * w; }

    double operator()(const ArctanPhase& p) const { return std::atan(w / p.width); }

    double operator()(const ModifiedArctanPhase& p) const {
        // atan2 keeps the branch continuous and odd where the denominator
        // changes sign; atan(w/denom) would jump by pi there.
        if (w == 0.0) return 0.0;
        const double denom = p.width - p.denom_coeff * (w * w + p.width * p.width);
        return std::atan2(w, denom);
    }

    double operator()(const PiStepPhase& p) const {
        // right-continuous: count steps at positions <= w
        const auto up = std::upper_bound(p.positions.begin(), p.positions.end(), w);
        auto count = static_cast<double>(up - p.positions.begin());
        if (p.zero_side == StepZeroSide::Right) count -= static_cast<double>(p.positions.size());
        return kPi * count;
    }

    double operator()(const TabulatedPhase& p) const {
        const auto& xs = p.node_offsets;
        const auto& ys = p.node_values;
        if (w <= xs.front()) return ys.front();
        if (w >= xs.back()) return ys.back();
        const auto hi = std::upper_bound(xs.begin(), xs.end(), w);
        const std::size_t i = static_cast<std::size_t>(hi - xs.begin());
        const double t = (w - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ys[i - 1] + t * (ys[i] - ys[i - 1]);
    }
};

}  // namespace

PhaseProfile::PhaseProfile(Shape shape, double global_offset)
    : shape_(std::move(shape)), global_offset_(global_offset) {
    validate(shape_);
}

double PhaseProfile::operator()(double w) const {
    return std::visit(Evaluator{w}, shape_) + global_offset_;
}

double PhaseProfile::left_limit(double w) const {
    if (const auto* step = std::get_if<PiStepPhase>(&shape_)) {
        const auto lo = std::lower_bound(step->positions.begin(), step->positions.end(), w);
        auto count = static_cast<double>(lo - step->positions.begin());  // positions strictly below w
        if (step->zero_side == StepZeroSide::Right) count -= static_cast<double>(step->positions.size());
        return kPi * count + global_offset_;
    }
    return (*this)(w);
}

const std::vector<double>* PhaseProfile::jump_positions() const {
    if (const auto* step = std::get_if<PiStepPhase>(&shape_)) return &step->positions;
    return nullptr;
}

std::vector<double> PhaseProfile::evaluate(std::span<const double> offsets) const {
    std::vector<double> out(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i) out[i] = (*this)(offsets[i]);
    return out;
}

}  // namespace cars
