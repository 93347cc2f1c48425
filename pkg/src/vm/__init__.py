# Bytecode interpreter
