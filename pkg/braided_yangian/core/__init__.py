# Core algebra package
