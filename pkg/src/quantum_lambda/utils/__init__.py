from dotenv import load_dotenv

# Load environment variables for all utils modules
load_dotenv()
