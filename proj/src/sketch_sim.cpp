#include "sigtri/sketch_sim.hpp"

#include <algorithm>
#include <string>

namespace sigtri {

namespace {
constexpr Vertex kMaxDenseVertices = 1 << 13;
}

SketchSim::SketchSim(std::size_t edge_budget, Vertex n, StreamMode mode)
    : budget_(edge_budget),
      n_(n),
      mode_(mode),
      scratch_left_(2 * edge_budget),
      sign_(static_cast<std::size_t>(n) * n, 0),
      by_tail_(n) {
    if (edge_budget == 0) throw std::invalid_argument("sketch edge budget must be >= 1");
    if (n > kMaxDenseVertices) throw std::invalid_argument("vertex domain too large for sketch");
}

bool SketchSim::matches(const DirectedItem& item) const {
    int8_t stored = sign_[static_cast<std::size_t>(item.head) * n_ + item.tail];
    if (stored == 0) return false;
    return mode_ == StreamMode::UnsignedAll || stored == item.sign;
}

bool SketchSim::contains(const DirectedItem& item) const { return !destroyed_ && matches(item); }

int SketchSim::sign_of(Vertex head, Vertex tail) const {
    return sign_[static_cast<std::size_t>(head) * n_ + tail];
}

void SketchSim::remove(const DirectedItem& item) {
    sign_[static_cast<std::size_t>(item.head) * n_ + item.tail] = 0;
    --live_items_;
}

void SketchSim::insert(Vertex v, Vertex w, int sign, std::size_t step) {
    if (destroyed_) throw SketchDestroyedError();
    if (step != inserts_done_ || step >= budget_)
        throw std::logic_error("insert at step " + std::to_string(step) +
                               ": scratch slots " + std::to_string(2 * step) + "," +
                               std::to_string(2 * step + 1) + " not available");
    if (v >= n_ || w >= n_ || v == w) throw std::invalid_argument("bad edge endpoints");
    int8_t stored = mode_ == StreamMode::UnsignedAll ? int8_t{1} : static_cast<int8_t>(sign);
    std::size_t vw = static_cast<std::size_t>(v) * n_ + w;
    std::size_t wv = static_cast<std::size_t>(w) * n_ + v;
    if (sign_[vw] != 0 || sign_[wv] != 0) throw std::logic_error("directed copy already present");
    sign_[vw] = stored;
    sign_[wv] = stored;
    by_tail_[w].push_back(v);
    by_tail_[v].push_back(w);
    scratch_left_ -= 2;
    live_items_ += 2;
    ++inserts_done_;
}

QueryOutcome SketchSim::query_pair(const DirectedItem& x, const DirectedItem& y, Rng& rng) {
    if (destroyed_) throw SketchDestroyedError();
    if (x == y) throw std::invalid_argument("query_pair needs two distinct items");
    bool has_x = matches(x);
    bool has_y = matches(y);

    if (has_x && has_y) {
        if (rng.uniform() < 2.0 / static_cast<double>(size())) {
            destroyed_ = true;
            return QueryOutcome::Plus;
        }
        remove(x);
        remove(y);
        return QueryOutcome::Bot;
    }
    if (has_x || has_y) {
        if (rng.uniform() < 1.0 / static_cast<double>(size())) {
            destroyed_ = true;
            return rng.bernoulli(0.5) ? QueryOutcome::Minus : QueryOutcome::Plus;
        }
        remove(has_x ? x : y);
        return QueryOutcome::Bot;
    }
    return QueryOutcome::Bot;
}

std::vector<Vertex> SketchSim::live_heads_for_tail(Vertex tail) const {
    std::vector<Vertex> heads;
    for (Vertex head : by_tail_[tail])
        if (sign_[static_cast<std::size_t>(head) * n_ + tail] != 0) heads.push_back(head);
    std::sort(heads.begin(), heads.end());
    return heads;
}

nlohmann::json SketchSim::dump() const {
    nlohmann::json items = nlohmann::json::array();
    for (Vertex tail = 0; tail < n_; ++tail) {
        for (Vertex head : by_tail_[tail]) {
            int8_t s = sign_[static_cast<std::size_t>(head) * n_ + tail];
            if (s != 0) items.push_back({head, tail, static_cast<int>(s)});
        }
    }
    std::sort(items.begin(), items.end());
    return {{"edge_budget", budget_},
            {"mode", mode_ == StreamMode::SignedT1 ? "signed-t1" : "unsigned-all"},
            {"destroyed", destroyed_},
            {"scratch_from", 2 * inserts_done_},
            {"scratch_count", destroyed_ ? 0 : scratch_left_},
            {"items", destroyed_ ? nlohmann::json::array() : items}};
}

}  // namespace sigtri
