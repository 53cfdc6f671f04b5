#pragma once

// Semi-naive evaluation of the completion rules over interned facts. Used by
// both plain saturation (one fact per distinct annotation, optional degree
// bound) and merged saturation (annotations of equal facts are unioned).

#include <array>
#include <bitset>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace elprov::detail {

using Id = std::uint32_t;
using VarSet = std::vector<Id>;  // sorted variable ids

// Concept id 0 is Top.
inline constexpr Id kTopId = 0;

enum Pred : std::uint8_t {
    SUB,   // (A, B)        A <= B
    CONJ,  // (A, B, C)     A and B <= C
    EX,    // (A, R)        A <= some R
    EXQ,   // (R, A, B)     some R.A <= B
    RI,    // (R, S)        R <= S
    RR,    // (R, A)        ran(R) <= A
    CA,    // (A, a)        A(a)
    RA,    // (R, a, b)     R(a, b)
    kPredCount
};

int arity(Pred p);

struct Fact {
    Pred pred;
    std::array<Id, 3> args{};
    VarSet mon;
    std::uint64_t derivations = 0;  // rule instances concluding this fact
    bool mirror = false;            // second orientation of a CONJ fact
    bool queued = false;
    bool indexed = false;
};

inline constexpr int kRuleCount = 17;  // CR0 .. CR16
using RuleMask = std::bitset<kRuleCount>;

enum class Policy { Insert, Merge };

struct EngineConfig {
    Policy policy = Policy::Insert;
    std::optional<std::size_t> max_degree;  // Insert only
    RuleMask disabled;
    std::size_t max_facts = 1'000'000;
    std::chrono::milliseconds time_budget{0};  // 0: unlimited
    // Merge only: facts are kept apart by the subset of these variables
    // their annotation contains (indexed by variable id).
    std::vector<bool> partition_vars;
};

struct EngineStats {
    std::array<std::uint64_t, kRuleCount> rule_applications{};
    std::uint64_t updates = 0;  // insertions plus annotation growths
    std::uint64_t join_steps = 0;
};

struct CapExceeded {
    std::string reason;
    EngineStats stats;
    std::size_t facts;
};

class Engine {
public:
    explicit Engine(EngineConfig cfg);

    // Input fact, attributed to `rule` (-1 for ontology axioms).
    void add(Pred p, std::array<Id, 3> args, VarSet mon, int rule = -1);
    // Throws CapExceeded.
    void run();

    const std::vector<Fact>& facts() const { return facts_; }
    const EngineStats& stats() const { return stats_; }

private:
    struct Key {
        Pred pred;
        std::array<Id, 3> args;
        VarSet mon;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };

    void add_one(Pred p, const std::array<Id, 3>& args, VarSet mon, int rule, bool mirror);
    void process(Id fid);
    void check_limits();
    VarSet partition_of(const VarSet& mon) const;

    EngineConfig cfg_;
    std::vector<Fact> facts_;
    std::unordered_map<Key, Id, KeyHash> lookup_;
    std::array<std::vector<Id>, kPredCount> all_;
    std::array<std::array<std::unordered_map<Id, std::vector<Id>>, 3>, kPredCount> index_;
    std::vector<Id> queue_;
    std::size_t head_ = 0;
    EngineStats stats_;
    std::chrono::steady_clock::time_point start_;

    friend struct Joiner;
};

}  // namespace elprov::detail
