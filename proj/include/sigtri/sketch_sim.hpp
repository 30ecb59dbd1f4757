#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "sigtri/sampling.hpp"
#include "sigtri/signed_graph.hpp"
#include "sigtri/stream.hpp"

namespace sigtri {

// Directed signed edge as held by the sketch: (head, tail, sign).
struct DirectedItem {
    Vertex head;
    Vertex tail;
    int sign;

    friend bool operator==(const DirectedItem&, const DirectedItem&) = default;
};

enum class QueryOutcome : int { Bot = 0, Plus = +1, Minus = -1 };

class SketchDestroyedError : public std::logic_error {
public:
    SketchDestroyedError() : std::logic_error("sketch already destroyed") {}
};

// Simulated quantum sketchpad over the universe of 2m scratch slots and
// directed signed-edge items. Holds exactly the measurement-outcome
// distribution of the destructive pair query:
//
//   both queried items present:   +1 and destroy with prob 2/|S|,
//                                 else remove both, return bot
//   exactly one present:          destroy with prob 1/|S| returning +1 or -1
//                                 with equal probability, else remove the
//                                 present one, return bot
//   neither present:              bot, state untouched
//
// A sketch is single-owner and cannot be copied; release code has no way to
// duplicate one mid-stream.
class SketchSim {
public:
    // Starts with scratch slots 0..2m-1 as the only items.
    SketchSim(std::size_t edge_budget, Vertex n, StreamMode mode);

    SketchSim(const SketchSim&) = delete;
    SketchSim& operator=(const SketchSim&) = delete;
    SketchSim(SketchSim&&) = default;
    SketchSim& operator=(SketchSim&&) = default;

    // Replaces scratch slots 2*step, 2*step+1 with the two directed copies
    // of (v,w,sign). Steps must be consumed in order starting from 0.
    void insert(Vertex v, Vertex w, int sign, std::size_t step);

    QueryOutcome query_pair(const DirectedItem& x, const DirectedItem& y, Rng& rng);

    bool destroyed() const { return destroyed_; }
    std::size_t size() const { return scratch_left_ + live_items_; }
    std::size_t live_items() const { return live_items_; }
    std::size_t edge_budget() const { return budget_; }
    StreamMode mode() const { return mode_; }

    bool contains(const DirectedItem& item) const;

    // Live heads u with an item (u, tail, *), sorted ascending.
    std::vector<Vertex> live_heads_for_tail(Vertex tail) const;
    int sign_of(Vertex head, Vertex tail) const;  // 0 when absent

    nlohmann::json dump() const;

private:
    bool matches(const DirectedItem& item) const;
    void remove(const DirectedItem& item);

    std::size_t budget_ = 0;
    Vertex n_ = 0;
    StreamMode mode_ = StreamMode::SignedT1;
    std::size_t scratch_left_ = 0;
    std::size_t live_items_ = 0;
    std::size_t inserts_done_ = 0;
    bool destroyed_ = false;
    std::vector<int8_t> sign_;                    // n*n, 0 = absent
    std::vector<std::vector<Vertex>> by_tail_;    // insertion log per tail
};

}  // namespace sigtri
