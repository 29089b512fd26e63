#include "mpst/simulate.hpp"

#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "mpst/project.hpp"

namespace mpst {

namespace {

struct Configuration {
    std::vector<std::size_t> control;                             // per machine
    std::vector<std::deque<std::pair<std::string, Sort>>> queues; // per ordered machine pair

    std::string key() const {
        std::string out;
        for (std::size_t s : control) {
            out += std::to_string(s);
            out += ';';
        }
        out += '|';
        for (const auto& q : queues) {
            for (const auto& [label, sort] : q) {
                out += label;
                out += '(';
                out += sort.name;
                out += ')';
            }
            out += ';';
        }
        return out;
    }
};

struct Move {
    std::size_t machine;
    std::size_t transition;
};

class Explorer {
public:
    explicit Explorer(const SystemConfig& config) : config_(config) {
        const std::size_t n = config.machines.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Role& role = config.machines[i].first;
            if (!role_index_.emplace(role.name, i).second)
                throw std::invalid_argument("duplicate role '" + role.name + "' in system");
        }
        for (const auto& [role, fsm] : config.machines) {
            for (const auto& out : fsm.states)
                for (const auto& t : out)
                    if (!role_index_.count(t.action.peer.name))
                        throw std::invalid_argument("machine for '" + role.name +
                                                    "' talks to undeclared role '" +
                                                    t.action.peer.name + "'");
        }
    }

    OracleResult run() {
        const std::size_t n = config_.machines.size();
        Configuration initial;
        initial.control.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            initial.control[i] = config_.machines[i].second.initial;
        initial.queues.resize(n * n);

        std::deque<Configuration> frontier;
        // Parent pointers for trace reconstruction: key -> (parent key, move).
        std::unordered_map<std::string, std::pair<std::string, Move>> parents;
        std::unordered_map<std::string, Configuration> seen;

        std::string initial_key = initial.key();
        seen.emplace(initial_key, initial);
        frontier.push_back(initial);

        OracleResult result;
        while (!frontier.empty()) {
            if (seen.size() > config_.max_configs) {
                result.kind = OracleResult::Kind::BoundExceeded;
                result.explored = seen.size();
                return result;
            }
            Configuration current = std::move(frontier.front());
            frontier.pop_front();
            std::string current_key = current.key();

            std::vector<Move> moves = enabled_moves(current);
            if (moves.empty()) {
                if (!is_final(current)) {
                    result.kind = OracleResult::Kind::Deadlock;
                    result.explored = seen.size();
                    result.trace = replay(parents, initial_key, current_key);
                    return result;
                }
                continue;
            }
            for (const Move& m : moves) {
                Configuration next = apply(current, m);
                std::string key = next.key();
                if (seen.count(key)) continue;
                seen.emplace(key, next);
                parents.emplace(key, std::make_pair(current_key, m));
                frontier.push_back(std::move(next));
            }
        }
        result.kind = OracleResult::Kind::DeadlockFree;
        result.explored = seen.size();
        return result;
    }

private:
    std::size_t queue_index(std::size_t from, std::size_t to) const {
        return from * config_.machines.size() + to;
    }

    std::vector<Move> enabled_moves(const Configuration& c) const {
        std::vector<Move> moves;
        for (std::size_t i = 0; i < config_.machines.size(); ++i) {
            const Fsm& fsm = config_.machines[i].second;
            const auto& out = fsm.out(c.control[i]);
            for (std::size_t k = 0; k < out.size(); ++k) {
                const Action& a = out[k].action;
                const std::size_t peer = role_index_.at(a.peer.name);
                if (a.dir == Dir::Send) {
                    if (c.queues[queue_index(i, peer)].size() < config_.channel_bound)
                        moves.push_back({i, k});
                } else {
                    const auto& q = c.queues[queue_index(peer, i)];
                    if (!q.empty() && q.front().first == a.label) moves.push_back({i, k});
                }
            }
        }
        return moves;
    }

    Configuration apply(const Configuration& c, const Move& m) const {
        Configuration next = c;
        const Fsm& fsm = config_.machines[m.machine].second;
        const FsmTransition& t = fsm.out(c.control[m.machine])[m.transition];
        const std::size_t peer = role_index_.at(t.action.peer.name);
        if (t.action.dir == Dir::Send) {
            next.queues[queue_index(m.machine, peer)].emplace_back(t.action.label, t.action.sort);
        } else {
            next.queues[queue_index(peer, m.machine)].pop_front();
        }
        next.control[m.machine] = t.target;
        return next;
    }

    bool is_final(const Configuration& c) const {
        for (std::size_t i = 0; i < config_.machines.size(); ++i)
            if (!config_.machines[i].second.terminal(c.control[i])) return false;
        for (const auto& q : c.queues)
            if (!q.empty()) return false;
        return true;
    }

    std::vector<FiredTransition> replay(
        const std::unordered_map<std::string, std::pair<std::string, Move>>& parents,
        const std::string& initial_key, const std::string& stuck_key) const {
        // Walk parent pointers back to the initial configuration, then replay
        // the moves forward to recover the fired actions.
        std::vector<Move> moves;
        std::string key = stuck_key;
        while (key != initial_key) {
            const auto& [parent, move] = parents.at(key);
            moves.push_back(move);
            key = parent;
        }
        std::vector<FiredTransition> trace;
        Configuration c;
        c.control.resize(config_.machines.size());
        for (std::size_t i = 0; i < config_.machines.size(); ++i)
            c.control[i] = config_.machines[i].second.initial;
        c.queues.resize(config_.machines.size() * config_.machines.size());
        for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
            const Fsm& fsm = config_.machines[it->machine].second;
            const FsmTransition& t = fsm.out(c.control[it->machine])[it->transition];
            trace.push_back({config_.machines[it->machine].first, t.action});
            c = apply(c, *it);
        }
        return trace;
    }

    const SystemConfig& config_;
    std::unordered_map<std::string, std::size_t> role_index_;
};

}  // namespace

std::string to_string(OracleResult::Kind kind) {
    switch (kind) {
        case OracleResult::Kind::DeadlockFree: return "deadlock-free";
        case OracleResult::Kind::Deadlock: return "deadlock";
        case OracleResult::Kind::BoundExceeded: return "bound-exceeded";
    }
    return "deadlock-free";
}

OracleResult run_bounded(const SystemConfig& config) {
    return Explorer(config).run();
}

SystemConfig compose_system(const GlobalProtocol& protocol, const std::map<Role, Fsm>& replacements,
                            std::size_t channel_bound, std::size_t max_configs) {
    for (const auto& [role, fsm] : replacements) {
        bool declared = false;
        for (const Role& r : protocol.roles) declared = declared || r == role;
        if (!declared)
            throw std::invalid_argument("replacement for undeclared role '" + role.name + "'");
    }

    SystemConfig system;
    system.channel_bound = channel_bound;
    system.max_configs = max_configs;
    for (const Role& role : protocol.roles) {
        auto it = replacements.find(role);
        if (it != replacements.end()) {
            system.machines.emplace_back(role, it->second);
        } else {
            system.machines.emplace_back(role, local_to_fsm(project(protocol.type, role), role));
        }
    }
    return system;
}

}  // namespace mpst
