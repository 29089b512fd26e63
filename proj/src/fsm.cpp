#include "mpst/fsm.hpp"

#include <set>

namespace mpst {

std::vector<std::string> validate_fsm(const Fsm& fsm) {
    std::vector<std::string> violations;
    if (fsm.states.empty()) {
        violations.push_back("machine has no states");
        return violations;
    }
    if (fsm.initial >= fsm.states.size())
        violations.push_back("initial state out of range");

    for (std::size_t s = 0; s < fsm.states.size(); ++s) {
        const auto& out = fsm.states[s];
        std::set<std::string> labels;
        for (const auto& t : out) {
            if (t.target >= fsm.states.size()) {
                violations.push_back("state " + std::to_string(s) + ": transition target out of range");
                continue;
            }
            if (!labels.insert(t.action.label).second)
                violations.push_back("state " + std::to_string(s) + ": duplicate label '" +
                                     t.action.label + "'");
            if (t.action.dir != out.front().action.dir)
                violations.push_back("state " + std::to_string(s) + ": mixed direction");
            if (t.action.peer != out.front().action.peer)
                violations.push_back("state " + std::to_string(s) + ": mixed peers '" +
                                     out.front().action.peer.name + "' and '" +
                                     t.action.peer.name + "'");
        }
    }

    if (fsm.initial < fsm.states.size()) {
        std::vector<bool> seen(fsm.states.size(), false);
        std::vector<std::size_t> stack{fsm.initial};
        seen[fsm.initial] = true;
        while (!stack.empty()) {
            std::size_t s = stack.back();
            stack.pop_back();
            for (const auto& t : fsm.states[s]) {
                if (t.target < fsm.states.size() && !seen[t.target]) {
                    seen[t.target] = true;
                    stack.push_back(t.target);
                }
            }
        }
        for (std::size_t s = 0; s < seen.size(); ++s)
            if (!seen[s])
                violations.push_back("state " + std::to_string(s) + ": unreachable from initial");
    }
    return violations;
}

}  // namespace mpst
