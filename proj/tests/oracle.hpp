// Brute-force reference computations used by the test suites.
#pragma once

#include <cstdint>
#include <vector>

#include "amu/games.hpp"

namespace oracle {

// Set partitions of n points (restricted growth strings).
long bell(int n);
// Weak orders on n points (maps onto an initial segment of 0..n-1).
long ordered_bell(int n);

struct Game {
    std::vector<bool> exists;
    std::vector<int> rank;
    std::vector<std::vector<int>> succ;
};
// Max-parity, even for Exists; a node without moves is lost by its owner.
std::vector<bool> zielonka(const Game& g);

struct Concrete {
    Game game;
    std::vector<amu::Element> nodes;
};
// Every node whose atoms lie in ctx witnesses plus `extra` fresh atoms.
Concrete instantiate(const amu::AtomicParityGame& g, int extra);

}  // namespace oracle
