# Core intermediate representation of subject programs
