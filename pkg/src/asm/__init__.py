# Textual assembly: parsing and canonical rendering of .mvm units
