#include "adpaad/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace adpaad {

namespace {

int64_t clamp_ratio(int64_t raw, int64_t lo, int64_t hi) {
    return std::min(std::max(raw, lo), hi);
}

}  // namespace

void RegisterLayout::add(const std::string& name, int width) {
    if (name.empty()) throw std::invalid_argument("register name must be nonempty");
    if (width < 1) throw std::invalid_argument("register width must be >= 1");
    for (const auto& r : regs_) {
        if (r.name == name)
            throw std::invalid_argument("duplicate register name: " + name);
    }
    if (total_ + width > kMaxQubits) {
        throw std::length_error("register layout exceeds " +
                                std::to_string(kMaxQubits) + " qubits: adding '" +
                                name + "' needs " + std::to_string(total_ + width));
    }
    regs_.push_back(Placed{name, width, total_});
    total_ += width;
}

bool RegisterLayout::has(const std::string& name) const noexcept {
    for (const auto& r : regs_)
        if (r.name == name) return true;
    return false;
}

RegisterLayout::Field RegisterLayout::field(const std::string& name) const {
    for (const auto& r : regs_) {
        if (r.name == name) {
            Field f;
            f.offset = r.offset;
            f.width = r.width;
            f.mask = (r.width >= 64) ? ~uint64_t{0} : ((uint64_t{1} << r.width) - 1);
            return f;
        }
    }
    throw std::invalid_argument("unknown register: " + name);
}

HybridState::HybridState(RegisterLayout layout) : layout_(std::move(layout)) {
    set_zero_state();
}

int HybridState::intern(const std::string& ann_name) {
    auto it = ann_ids_.find(ann_name);
    if (it != ann_ids_.end()) return it->second;
    const int id = static_cast<int>(ann_names_.size());
    ann_names_.push_back(ann_name);
    ann_ids_.emplace(ann_name, id);
    return id;
}

const std::string& HybridState::ann_name(int id) const {
    if (id < 0 || static_cast<size_t>(id) >= ann_names_.size())
        throw std::out_of_range("unknown annotation id");
    return ann_names_[static_cast<size_t>(id)];
}

int64_t HybridState::annotation(const Entry& e, int id) {
    for (const auto& [k, v] : e.ann)
        if (k == id) return v;
    throw std::logic_error("annotation missing on entry");
}

bool HybridState::has_annotation(const Entry& e, int id) noexcept {
    for (const auto& [k, v] : e.ann) {
        (void)v;
        if (k == id) return true;
    }
    return false;
}

void HybridState::set_zero_state() {
    entries_.clear();
    entries_.emplace(0, Entry{{1.0, 0.0}, {}});
}

void HybridState::hadamard_uniform(const std::string& reg) {
    const auto f = layout_.field(reg);
    prepare_uniform_subset(reg, f.mask + 1);
}

void HybridState::prepare_uniform_subset(const std::string& reg, uint64_t count) {
    const auto f = layout_.field(reg);
    if (count < 1 || count > f.mask + 1)
        throw std::invalid_argument("subset size out of range for register " + reg);
    if (entries_.size() * count > kMaxEntries)
        throw std::length_error("state expansion exceeds simulator capacity");
    const double scale = 1.0 / std::sqrt(static_cast<double>(count));
    std::map<uint64_t, Entry> next;
    for (const auto& [basis, e] : entries_) {
        if (f.get(basis) != 0)
            throw std::logic_error("register " + reg +
                                   " must be |0> before uniform preparation");
        for (uint64_t v = 0; v < count; ++v) {
            Entry copy = e;
            copy.amp *= scale;
            next.emplace(f.set(basis, v), std::move(copy));
        }
    }
    entries_ = std::move(next);
}

void HybridState::annotate(const std::string& name, const Value& value) {
    const int id = intern(name);
    for (auto& [basis, e] : entries_) {
        const int64_t v = value(basis, e);
        bool replaced = false;
        for (auto& kv : e.ann) {
            if (kv.first == id) {
                kv.second = v;
                replaced = true;
                break;
            }
        }
        if (!replaced) {
            e.ann.emplace_back(id, v);
            std::sort(e.ann.begin(), e.ann.end());
        }
    }
}

void HybridState::drop_annotation(const std::string& name) {
    auto it = ann_ids_.find(name);
    if (it == ann_ids_.end()) return;
    const int id = it->second;
    for (auto& [basis, e] : entries_) {
        e.ann.erase(std::remove_if(e.ann.begin(), e.ann.end(),
                                   [id](const auto& kv) { return kv.first == id; }),
                    e.ann.end());
    }
}

void HybridState::apply_basis_map(const BasisMap& map) {
    std::map<uint64_t, Entry> next;
    const uint64_t span_mask = (layout_.total_width() >= 64)
                                   ? ~uint64_t{0}
                                   : ((uint64_t{1} << layout_.total_width()) - 1);
    for (const auto& [basis, e] : entries_) {
        const uint64_t to = map(basis, e);
        if ((to & ~span_mask) != 0)
            throw std::logic_error("basis map leaves the register space");
        if (!next.emplace(to, e).second)
            throw std::logic_error("basis map is not injective on the current support");
    }
    entries_ = std::move(next);
}

void HybridState::controlled_rotation(const std::string& target_reg, RotationKind kind,
                                      int frac_bits, const Value& ratio_raw,
                                      const Pred& guard) {
    const auto f = layout_.field(target_reg);
    if (f.width != 1)
        throw std::invalid_argument("rotation target must be a 1-qubit register");
    if (frac_bits < 0 || frac_bits > 62)
        throw std::invalid_argument("rotation frac_bits out of range");
    const int64_t one = int64_t{1} << frac_bits;
    std::map<uint64_t, Entry> next;
    auto put = [&next](uint64_t basis, Entry&& e) {
        auto [it, fresh] = next.emplace(basis, std::move(e));
        if (!fresh)
            throw std::logic_error("rotation collided with an occupied basis state");
        (void)it;
    };
    for (const auto& [basis, e] : entries_) {
        if (guard && !guard(basis, e)) {
            put(basis, Entry{e});
            continue;
        }
        if (f.get(basis) != 0)
            throw std::logic_error("rotation target register already set");
        double a1 = 0.0;
        if (kind == RotationKind::sqrt_ratio) {
            const int64_t r = clamp_ratio(ratio_raw(basis, e), 0, one);
            a1 = std::sqrt(std::ldexp(static_cast<double>(r), -frac_bits));
        } else {
            const int64_t s = clamp_ratio(ratio_raw(basis, e), -one, one);
            a1 = std::ldexp(static_cast<double>(s), -frac_bits);
        }
        const double a0 = std::sqrt(std::max(0.0, 1.0 - a1 * a1));
        Entry stay = e;
        stay.amp *= a0;
        Entry flip = e;
        flip.amp *= a1;
        if (stay.amp != std::complex<double>{}) put(f.set(basis, 0), std::move(stay));
        if (flip.amp != std::complex<double>{}) put(f.set(basis, 1), std::move(flip));
    }
    entries_ = std::move(next);
}

double HybridState::probability_of(const Pred& pred) const {
    double p = 0.0;
    for (const auto& [basis, e] : entries_)
        if (pred(basis, e)) p += std::norm(e.amp);
    return p;
}

double HybridState::postselect(const Pred& pred) {
    const double p = probability_of(pred);
    if (p <= 0.0)
        throw std::runtime_error("postselection on an event of probability zero");
    const double scale = 1.0 / std::sqrt(p);
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (pred(it->first, it->second)) {
            it->second.amp *= scale;
            ++it;
        } else {
            it = entries_.erase(it);
        }
    }
    return p;
}

uint64_t HybridState::measure(const std::string& reg, std::mt19937_64& rng) {
    const auto f = layout_.field(reg);
    std::map<uint64_t, double> marginal;
    for (const auto& [basis, e] : entries_)
        marginal[f.get(basis)] += std::norm(e.amp);
    double total = 0.0;
    for (const auto& [v, p] : marginal) total += p;
    if (total <= 0.0) throw std::runtime_error("measurement on a zero state");
    double draw = uniform_unit(rng) * total;
    uint64_t outcome = marginal.rbegin()->first;
    for (const auto& [v, p] : marginal) {
        if (draw < p) {
            outcome = v;
            break;
        }
        draw -= p;
    }
    postselect([&f, outcome](uint64_t basis, const Entry&) {
        return f.get(basis) == outcome;
    });
    return outcome;
}

void HybridState::phase_flip(const Pred& pred) {
    for (auto& [basis, e] : entries_)
        if (pred(basis, e)) e.amp = -e.amp;
}

void HybridState::reflect_about_uniform(const std::string& reg, uint64_t count) {
    const auto f = layout_.field(reg);
    if (count < 1 || count > f.mask + 1)
        throw std::invalid_argument("subset size out of range for register " + reg);
    std::complex<double> sum{};
    for (const auto& [basis, e] : entries_) {
        if ((basis & ~(f.mask << f.offset)) != 0)
            throw std::logic_error(
                "reflection requires all other registers to read 0");
        if (f.get(basis) >= count)
            throw std::logic_error("reflection support leaves the subset");
        sum += e.amp;
    }
    const std::complex<double> twice_mean = 2.0 * sum / static_cast<double>(count);
    for (uint64_t v = 0; v < count; ++v) {
        const uint64_t basis = f.set(0, v);
        auto it = entries_.find(basis);
        if (it == entries_.end())
            it = entries_.emplace(basis, Entry{{0.0, 0.0}, {}}).first;
        it->second.amp = twice_mean - it->second.amp;
    }
    prune_zeros();
}

void HybridState::transform_amplitudes(const AmpMap& map) {
    for (auto& [basis, e] : entries_) e.amp = map(basis, e);
    prune_zeros();
}

double HybridState::norm_squared() const {
    double p = 0.0;
    for (const auto& [basis, e] : entries_) {
        (void)basis;
        p += std::norm(e.amp);
    }
    return p;
}

void HybridState::check_norm(double tol) const {
    const double n2 = norm_squared();
    if (std::fabs(n2 - 1.0) > tol)
        throw std::logic_error("state norm drifted: <psi|psi> = " + std::to_string(n2));
}

void HybridState::prune_zeros() {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (it->second.amp == std::complex<double>{})
            it = entries_.erase(it);
        else
            ++it;
    }
}

void HybridState::dump_csv(std::ostream& out) const {
    out << "basis";
    for (const auto& r : layout_.registers()) out << ',' << r.name;
    out << ",re,im,prob,annotations\n";
    out.precision(17);
    for (const auto& [basis, e] : entries_) {
        out << basis;
        for (const auto& r : layout_.registers()) {
            const auto f = layout_.field(r.name);
            out << ',' << f.get(basis);
        }
        out << ',' << e.amp.real() << ',' << e.amp.imag() << ',' << std::norm(e.amp)
            << ',';
        bool first = true;
        for (const auto& [id, v] : e.ann) {
            if (!first) out << ';';
            first = false;
            out << ann_name(id) << '=' << v;
        }
        out << '\n';
    }
}

}  // namespace adpaad
