#include "freess/isa.hpp"

#include <array>
#include <fstream>
#include <sstream>

namespace freess {

const char* mnemonic(Opcode op) {
    switch (op) {
    case Opcode::ADD: return "ADD";
    case Opcode::ADDI: return "ADDI";
    case Opcode::LW: return "LW";
    case Opcode::SW: return "SW";
    case Opcode::BEQ: return "BEQ";
    case Opcode::BNE: return "BNE";
    case Opcode::MUL: return "MUL";
    }
    return "?";
}

FuClass fu_class(Opcode op) {
    switch (op) {
    case Opcode::ADD:
    case Opcode::ADDI: return FuClass::A;
    case Opcode::MUL: return FuClass::M;
    case Opcode::LW: return FuClass::L;
    case Opcode::SW: return FuClass::S;
    case Opcode::BEQ:
    case Opcode::BNE: return FuClass::B;
    }
    return FuClass::A;
}

char fu_letter(FuClass c) {
    static constexpr std::array<char, 7> letters{'A', 'M', 'L', 'S', 'B', 'F', 'X'};
    return letters[static_cast<size_t>(c)];
}

std::string Instruction::to_string() const {
    std::ostringstream os;
    os << mnemonic(opcode) << ' ';
    switch (opcode) {
    case Opcode::ADD:
    case Opcode::MUL:
        os << 'x' << op1 << ", x" << op2 << ", x" << op3;
        break;
    case Opcode::ADDI:
        os << 'x' << op1 << ", x" << op2 << ", " << op3;
        break;
    case Opcode::LW:
        os << 'x' << op1 << ", " << op3 << "(x" << op2 << ")";
        break;
    case Opcode::SW:
        os << 'x' << op1 << ", " << op3 << "(x" << op2 << ")";
        break;
    case Opcode::BEQ:
    case Opcode::BNE:
        os << 'x' << op1 << ", x" << op2 << ", " << op3;
        break;
    }
    return os.str();
}

namespace {

[[noreturn]] void fail(int lineno, const std::string& what) {
    std::ostringstream os;
    os << "line " << lineno << ": " << what;
    throw ProgramError(os.str());
}

void check_reg(int lineno, const char* field, int idx, int num_logical_regs) {
    if (idx < 0 || idx >= num_logical_regs) {
        std::ostringstream os;
        os << "register index out of range: " << field << "=" << idx
           << " (valid 0.." << num_logical_regs - 1 << ")";
        fail(lineno, os.str());
    }
}

}  // namespace

Instruction decode_line(const std::string& line, int lineno, int num_logical_regs) {
    std::istringstream is(line);
    std::array<int, 4> tok{};
    int n = 0;
    std::string word;
    while (is >> word) {
        if (n == 4) fail(lineno, "expected four integer fields, got more");
        size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(word, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != word.size()) fail(lineno, "not an integer: '" + word + "'");
        tok[static_cast<size_t>(n++)] = v;
    }
    if (n != 4) {
        std::ostringstream os;
        os << "expected four integer fields, got " << n;
        fail(lineno, os.str());
    }
    if (tok[0] < 1 || tok[0] > 7) {
        std::ostringstream os;
        os << "unknown opcode " << tok[0];
        fail(lineno, os.str());
    }
    Instruction in;
    in.opcode = static_cast<Opcode>(tok[0]);
    in.op1 = tok[1];
    in.op2 = tok[2];
    in.op3 = tok[3];

    switch (in.opcode) {
    case Opcode::ADD:
    case Opcode::MUL:
        check_reg(lineno, "xi", in.op1, num_logical_regs);
        check_reg(lineno, "xj", in.op2, num_logical_regs);
        check_reg(lineno, "xk", in.op3, num_logical_regs);
        break;
    case Opcode::ADDI:
    case Opcode::LW:
    case Opcode::SW:
        check_reg(lineno, "xi", in.op1, num_logical_regs);
        check_reg(lineno, "xj", in.op2, num_logical_regs);
        break;
    case Opcode::BEQ:
    case Opcode::BNE:
        check_reg(lineno, "xi", in.op1, num_logical_regs);
        check_reg(lineno, "xj", in.op2, num_logical_regs);
        break;
    }
    return in;
}

Program load_program(const std::string& text, int num_logical_regs) {
    Program prog;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        prog.instrs.push_back(decode_line(line, lineno, num_logical_regs));
        prog.lines.push_back(lineno);
    }
    if (prog.instrs.empty()) throw ProgramError("empty program");
    for (int i = 0; i < prog.size(); ++i) {
        if (!prog.instrs[static_cast<size_t>(i)].is_branch()) continue;
        int target = prog.branch_target(i);
        if (target < 0 || target > prog.size()) {
            std::ostringstream os;
            os << "branch target out of range: instruction " << i << " (line "
               << prog.lines[static_cast<size_t>(i)] << ") jumps to " << target
               << ", program has " << prog.size() << " instructions";
            throw ProgramError(os.str());
        }
    }
    return prog;
}

Program load_program_file(const std::string& path, int num_logical_regs) {
    std::ifstream f(path);
    if (!f) throw ProgramError("cannot open program file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return load_program(buf.str(), num_logical_regs);
}

}  // namespace freess
