#include "freess/microstate.hpp"

#include <algorithm>
#include <cassert>

namespace freess {

MachineState::MachineState(const ArchConfig& cfg)
    : mem(cfg.memory_size_bytes),
      lq_cap_(cfg.lq_slots),
      sq_cap_(cfg.sq_slots),
      wakeup_usable_same_cycle_(cfg.wakeup_same_cycle_as_writeback) {
    pregs.resize(static_cast<size_t>(cfg.num_phys_regs));
    reg_map_.resize(static_cast<size_t>(cfg.num_logical_regs));
    // Initial mapping xi -> Pi with value 0; the remaining physical
    // registers form the free pool.
    for (int i = 0; i < cfg.num_logical_regs; ++i) {
        reg_map_[static_cast<size_t>(i)] = i;
        pregs[static_cast<size_t>(i)].allocated = true;
        pregs[static_cast<size_t>(i)].ready = true;
        pregs[static_cast<size_t>(i)].value = 0;
    }
    for (int p = cfg.num_logical_regs; p < cfg.num_phys_regs; ++p) free_pool.push_back(p);
    iw.resize(static_cast<size_t>(cfg.iw_slots));
    rob_.resize(static_cast<size_t>(cfg.rob_slots));
}

std::optional<RenameResult> MachineState::rename_alloc(int logical) {
    if (free_pool.empty()) return std::nullopt;
    RenameResult r;
    r.new_phys = free_pool.front();
    free_pool.pop_front();
    r.old_phys = reg_map_[static_cast<size_t>(logical)];
    reg_map_[static_cast<size_t>(logical)] = r.new_phys;
    PhysReg& p = pregs[static_cast<size_t>(r.new_phys)];
    p.allocated = true;
    p.ready = false;
    p.value = 0;
    return r;
}

int MachineState::iw_free_slots() const {
    int n = 0;
    for (const IwSlot& s : iw)
        if (!s.occupied) ++n;
    return n;
}

std::optional<int> MachineState::iw_insert(const IwSlot& record) {
    for (size_t i = 0; i < iw.size(); ++i) {
        if (!iw[i].occupied) {
            iw[i] = record;
            iw[i].occupied = true;
            iw[i].issued = false;
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

int MachineState::iw_wakeup(int phys, int cycle) {
    int usable = wakeup_usable_same_cycle_ ? cycle : cycle + 1;
    int n = 0;
    for (IwSlot& s : iw) {
        if (!s.occupied) continue;
        if (s.src_pj == phys && s.cj == kPending) {
            s.cj = cycle;
            s.usable_j = usable;
            ++n;
        }
        if (s.src_pk == phys && s.ck == kPending) {
            s.ck = cycle;
            s.usable_k = usable;
            ++n;
        }
    }
    return n;
}

bool MachineState::iw_slot_eligible(const IwSlot& slot, int cycle) const {
    if (!slot.occupied || slot.issued) return false;
    if (slot.src_pj != kNone && (slot.usable_j == kPending || slot.usable_j > cycle)) return false;
    if (slot.src_pk != kNone && (slot.usable_k == kPending || slot.usable_k > cycle)) return false;
    return true;
}

MachineState::SelectResult MachineState::iw_select(FuBank& fus, int width, int cycle) {
    // program order = ascending dynamic id
    std::vector<int> order;
    for (size_t i = 0; i < iw.size(); ++i)
        if (iw[i].occupied && !iw[i].issued) order.push_back(static_cast<int>(i));
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return iw[static_cast<size_t>(a)].dyn_id < iw[static_cast<size_t>(b)].dyn_id; });

    SelectResult res;
    for (int id : order) {
        IwSlot& s = iw[static_cast<size_t>(id)];
        if (!iw_slot_eligible(s, cycle)) continue;
        if (static_cast<int>(res.selected.size()) >= width) {
            res.blocked.emplace_back(id, false);
            continue;
        }
        FuClass cls = fu_class(s.opcode);
        if (!fus.can_accept(cls)) {
            res.blocked.emplace_back(id, true);
            continue;
        }
        fus.note_issue(cls);
        s.issued = true;
        res.selected.push_back(id);
    }
    return res;
}

std::optional<int> MachineState::iw_oldest_unissued() const {
    int best = kNone;
    int best_dyn = INT32_MAX;
    for (size_t i = 0; i < iw.size(); ++i) {
        const IwSlot& s = iw[i];
        if (s.occupied && !s.issued && s.dyn_id < best_dyn) {
            best_dyn = s.dyn_id;
            best = static_cast<int>(i);
        }
    }
    if (best == kNone) return std::nullopt;
    return best;
}

std::optional<int> MachineState::rob_alloc(const RobSlot& record) {
    if (rob_count_ == static_cast<int>(rob_.size())) return std::nullopt;
    int id = rob_tail_;
    rob_[static_cast<size_t>(id)] = record;
    rob_[static_cast<size_t>(id)].live = true;
    rob_[static_cast<size_t>(id)].retiring = false;
    rob_[static_cast<size_t>(id)].c = false;
    rob_tail_ = (rob_tail_ + 1) % static_cast<int>(rob_.size());
    ++rob_count_;
    return id;
}

std::vector<int> MachineState::rob_commit_ready(int width) const {
    std::vector<int> out;
    int id = rob_head_;
    for (int n = 0; n < rob_count_ && static_cast<int>(out.size()) < width; ++n) {
        const RobSlot& s = rob_[static_cast<size_t>(id)];
        if (!s.c || s.retiring) break;
        out.push_back(id);
        id = (id + 1) % static_cast<int>(rob_.size());
    }
    return out;
}

void MachineState::rob_retire(int rob_id) {
    RobSlot& s = rob_[static_cast<size_t>(rob_id)];
    assert(s.live && s.c && rob_id == rob_head_);
    s.retiring = true;
    rob_head_ = (rob_head_ + 1) % static_cast<int>(rob_.size());
    // rob_count_ stays until end_cycle so the slot is not re-allocatable
    // this cycle; track via the retiring flag.
    if (s.old_phys != kNone) defer_pool_return(s.old_phys);
}

std::vector<SquashRecord> MachineState::rob_rollback(int to_rob_id) {
    assert(rob_[static_cast<size_t>(to_rob_id)].live &&
           !rob_[static_cast<size_t>(to_rob_id)].retiring);
    std::vector<SquashRecord> squashed;
    int cap = static_cast<int>(rob_.size());
    while (rob_count_ > 0) {
        int last = (rob_tail_ - 1 + cap) % cap;
        if (last == to_rob_id) break;
        RobSlot& s = rob_[static_cast<size_t>(last)];
        if (s.retiring) break;  // retired entries are older than any live branch
        assert(s.live);
        // restore the register map and the free pool
        if (s.dest_logical != kNone) {
            reg_map_[static_cast<size_t>(s.dest_logical)] = s.old_phys;
            PhysReg& p = pregs[static_cast<size_t>(s.dest_phys)];
            p.allocated = false;
            p.ready = false;
            free_pool.push_back(s.dest_phys);
        }
        // free the paired IW slot if the instruction had not fired
        for (IwSlot& slot : iw) {
            if (slot.occupied && slot.dyn_id == s.dyn_id) {
                slot = IwSlot{};
                break;
            }
        }
        lsq_release(s.dyn_id);
        squashed.push_back({s.dyn_id, last});
        s.live = false;
        rob_tail_ = last;
        --rob_count_;
    }
    return squashed;
}

std::vector<int> MachineState::rob_live_ids() const {
    std::vector<int> out;
    int id = rob_head_;
    for (int n = 0; n < rob_count_; ++n) {
        out.push_back(id);
        id = (id + 1) % static_cast<int>(rob_.size());
    }
    return out;
}

bool MachineState::lsq_reserve(const LsqEntry& entry) {
    if (entry.op == Opcode::LW) {
        if (lq_free_slots() <= 0) return false;
        lq.push_back(entry);
    } else {
        if (sq_free_slots() <= 0) return false;
        sq.push_back(entry);
    }
    return true;
}

void MachineState::lsq_fill_addr(int dyn_id, int32_t efad, int cycle) {
    LsqEntry* e = lsq_find(dyn_id);
    assert(e != nullptr);
    e->addr_known = true;
    e->efad = efad;
    e->queued_cycle = cycle;
}

LsqEntry* MachineState::lsq_find(int dyn_id) {
    for (LsqEntry& e : lq)
        if (e.dyn_id == dyn_id) return &e;
    for (LsqEntry& e : sq)
        if (e.dyn_id == dyn_id) return &e;
    return nullptr;
}

LoadAccessResult MachineState::lsq_load_may_access(const LsqEntry& load) const {
    const LsqEntry* match = nullptr;
    for (const LsqEntry& st : sq) {
        if (st.dyn_id > load.dyn_id) continue;  // younger than the load
        if (!st.addr_known) return {LoadAccess::Wait, 0};
        if (st.efad == load.efad) match = &st;  // program order; keep youngest
    }
    if (match != nullptr) {
        if (match->value_p == kNone) return {LoadAccess::Wait, 0};
        const PhysReg& p = pregs[static_cast<size_t>(match->value_p)];
        if (!p.ready) return {LoadAccess::Wait, 0};
        return {LoadAccess::Forward, p.value};
    }
    return {LoadAccess::Proceed, 0};
}

void MachineState::lsq_release(int dyn_id) {
    for (auto it = lq.begin(); it != lq.end(); ++it) {
        if (it->dyn_id == dyn_id) {
            lq.erase(it);
            return;
        }
    }
    for (auto it = sq.begin(); it != sq.end(); ++it) {
        if (it->dyn_id == dyn_id) {
            sq.erase(it);
            return;
        }
    }
}

void MachineState::end_cycle() {
    for (int p : pending_pool_returns_) {
        PhysReg& r = pregs[static_cast<size_t>(p)];
        r.allocated = false;
        r.ready = false;
        free_pool.push_back(p);
    }
    pending_pool_returns_.clear();
    for (int dyn : pending_lsq_release_) lsq_release(dyn);
    pending_lsq_release_.clear();
    for (RobSlot& s : rob_) {
        if (s.live && s.retiring) {
            s.live = false;
            --rob_count_;
        }
    }
    for (IwSlot& s : iw) {
        if (s.occupied && s.issued) s = IwSlot{};
    }
}

void MachineState::set_reg_value(int logical, int32_t value) {
    PhysReg& p = pregs[static_cast<size_t>(reg_map_[static_cast<size_t>(logical)])];
    p.value = value;
    p.ready = true;
}

int32_t MachineState::reg_value(int logical) const {
    return pregs[static_cast<size_t>(reg_map_[static_cast<size_t>(logical)])].value;
}

bool MachineState::reg_ready(int logical) const {
    return pregs[static_cast<size_t>(reg_map_[static_cast<size_t>(logical)])].ready;
}

}  // namespace freess
