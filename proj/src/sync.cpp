#include "mpst/sync.hpp"

#include <set>
#include <utility>

#include "mpst/project.hpp"

namespace mpst {

namespace {

class SyncChecker {
public:
    SyncChecker(const Fsm& sub, const Fsm& sup, const SortTable& sorts)
        : sub_(sub), sup_(sup), sorts_(sorts) {}

    bool related(std::size_t s, std::size_t t) {
        if (!assumed_.insert({s, t}).second) return true;
        bool ok = step(s, t);
        assumed_.erase({s, t});
        return ok;
    }

private:
    bool step(std::size_t s, std::size_t t) {
        const bool sub_terminal = sub_.terminal(s);
        const bool sup_terminal = sup_.terminal(t);
        if (sub_terminal || sup_terminal) return sub_terminal && sup_terminal;

        const auto& sub_out = sub_.out(s);
        const auto& sup_out = sup_.out(t);
        const Action& sub_head = sub_out.front().action;
        const Action& sup_head = sup_out.front().action;
        if (sub_head.dir != sup_head.dir || sub_head.peer != sup_head.peer) return false;

        if (sub_head.dir == Dir::Receive) {
            // The subtype must offer every branch the supertype can receive.
            for (const auto& b : sup_out) {
                const FsmTransition* a = find(sub_out, b.action.label);
                if (!a) return false;
                if (!sorts_.coercible(b.action.sort, a->action.sort)) return false;
                if (!related(a->target, b.target)) return false;
            }
            return true;
        }
        // The subtype may select only what the supertype offers.
        for (const auto& a : sub_out) {
            const FsmTransition* b = find(sup_out, a.action.label);
            if (!b) return false;
            if (!sorts_.coercible(a.action.sort, b->action.sort)) return false;
            if (!related(a.target, b->target)) return false;
        }
        return true;
    }

    static const FsmTransition* find(const std::vector<FsmTransition>& out,
                                     const std::string& label) {
        for (const auto& t : out)
            if (t.action.label == label) return &t;
        return nullptr;
    }

    const Fsm& sub_;
    const Fsm& sup_;
    const SortTable& sorts_;
    std::set<std::pair<std::size_t, std::size_t>> assumed_;
};

}  // namespace

bool check_sync_subtype(const LocalRef& sub, const LocalRef& sup, const SortTable& sorts) {
    Fsm sub_fsm = local_to_fsm(sub);
    Fsm sup_fsm = local_to_fsm(sup);
    return SyncChecker(sub_fsm, sup_fsm, sorts).related(sub_fsm.initial, sup_fsm.initial);
}

}  // namespace mpst
