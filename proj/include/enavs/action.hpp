#pragma once

namespace enavs {

// Joint decision for one chunk: which ladder bitrate to request and whether
// to run the downloaded chunk through the enhancement module.
struct Action {
    int bitrate_index = 0;
    bool enhance = false;

    friend bool operator==(const Action&, const Action&) = default;
};

// Canonical action enumeration: ladder order, enhance flag 0 before 1 within
// each bitrate. Manifest PSNR rows, observation slots, and the policy head
// all use this order.
inline int action_index(Action a) { return a.bitrate_index * 2 + (a.enhance ? 1 : 0); }

inline Action action_from_index(int idx) { return Action{idx / 2, (idx % 2) != 0}; }

}  // namespace enavs
