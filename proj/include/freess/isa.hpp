#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace freess {

// Seven-instruction encoded ISA. Programs are plain text, one instruction
// per line: four whitespace-separated signed decimal integers
// (opcode op1 op2 op3). '#' starts a comment, blank lines are skipped.
enum class Opcode : int {
    ADD  = 1,
    ADDI = 2,
    LW   = 3,
    SW   = 4,
    BEQ  = 5,
    BNE  = 6,
    MUL  = 7,
};

// Functional-unit classes. F and X exist only in the resource accounting;
// no instruction of this ISA dispatches to them.
enum class FuClass : int { A = 0, M, L, S, B, F, X };
inline constexpr int kNumFuClasses = 7;

constexpr int default_logical_regs = 8;

const char* mnemonic(Opcode op);
FuClass fu_class(Opcode op);
char fu_letter(FuClass c);

struct ProgramError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decoded static instruction. op1..op3 keep the raw encoded fields; the
// accessors apply the per-opcode interpretation:
//   ADD/MUL  xi <- xj op xk        (op1=xi, op2=xj, op3=xk)
//   ADDI     xi <- xj + I          (op1=xi, op2=xj, op3=I)
//   LW       xi <- Mem[xj + I]     (op1=xi, op2=xj, op3=I)
//   SW       Mem[xj + I] <- xi     (op1=value xi, op2=base xj, op3=I)
//   BEQ/BNE  compare xi,xj, jump I instructions (op3=I, forward positive)
struct Instruction {
    Opcode opcode{Opcode::ADD};
    int op1 = 0;
    int op2 = 0;
    int op3 = 0;

    bool is_branch() const { return opcode == Opcode::BEQ || opcode == Opcode::BNE; }
    bool is_load() const { return opcode == Opcode::LW; }
    bool is_store() const { return opcode == Opcode::SW; }
    bool is_mem() const { return is_load() || is_store(); }

    // Destination logical register, if the instruction writes one.
    std::optional<int> dest() const {
        switch (opcode) {
        case Opcode::ADD:
        case Opcode::ADDI:
        case Opcode::LW:
        case Opcode::MUL: return op1;
        default: return std::nullopt;
        }
    }

    // First source register (issue-gating): xj for ALU/memory ops, xi for
    // branches. Every instruction of this ISA has one.
    int src_j() const { return is_branch() ? op1 : op2; }

    // Second issue-gating source: xk for ADD/MUL, xj for branches.
    std::optional<int> src_k() const {
        switch (opcode) {
        case Opcode::ADD:
        case Opcode::MUL: return op3;
        case Opcode::BEQ:
        case Opcode::BNE: return op2;
        default: return std::nullopt;
        }
    }

    // Store-data register (tracked in the store queue, not issue-gating).
    std::optional<int> store_value_reg() const {
        if (is_store()) return op1;
        return std::nullopt;
    }

    bool has_immediate() const { return opcode != Opcode::ADD && opcode != Opcode::MUL; }
    int immediate() const { return op3; }

    // Re-encode to the four file fields.
    std::array<int, 4> encode() const {
        return {static_cast<int>(opcode), op1, op2, op3};
    }

    bool operator==(const Instruction&) const = default;

    std::string to_string() const;
};

struct Program {
    std::vector<Instruction> instrs;
    std::vector<int> lines;  // 1-based source line of each instruction

    int size() const { return static_cast<int>(instrs.size()); }
    const Instruction& at(int i) const { return instrs.at(static_cast<size_t>(i)); }
    // Branch target: static index + displacement. size() means exit.
    int branch_target(int idx) const { return idx + instrs[static_cast<size_t>(idx)].op3; }
};

// Decode one program line (comments already make the line blank-equivalent).
// `lineno` is used in diagnostics only.
Instruction decode_line(const std::string& line, int lineno = 0,
                        int num_logical_regs = default_logical_regs);

// Decode a whole program text; skips blank and '#' comment lines, validates
// register indices against `num_logical_regs` and branch targets against
// the program bounds.
Program load_program(const std::string& text, int num_logical_regs = default_logical_regs);

Program load_program_file(const std::string& path, int num_logical_regs = default_logical_regs);

}  // namespace freess
