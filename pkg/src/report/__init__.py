# Fix reports
